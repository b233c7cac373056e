fn main() {
    std::process::exit(stepwise::cli::run(std::env::args_os()));
}
