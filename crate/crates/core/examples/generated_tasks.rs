//! Seeded "find x with det = 0" tasks and the stepwise items built from them.
//!
//! ```text
//! cargo run --example generated_tasks -- 5 42
//! ```

use stepwise::assessment::instantiate_generated_item;
use stepwise::mathcore::rational::format_rational;
use stepwise::mathcore::{generate_det_task, DetTaskSpec, IntRange, Polynomial};

fn main() {
    let mut args = std::env::args().skip(1);
    let count: u64 = args.next().and_then(|a| a.parse().ok()).unwrap_or(3);
    let seed: u64 = args.next().and_then(|a| a.parse().ok()).unwrap_or(7);

    for k in 0..count {
        let mut spec = DetTaskSpec::new(seed + k);
        spec.template.root_range = IntRange::new(-5, 5);
        let task = generate_det_task(&spec).expect("generation");
        println!("seed {} ({} draws)", spec.seed, task.draws);
        for row in task.matrix.rows() {
            let cells: Vec<String> = row.iter().map(|p| p.to_markup()).collect();
            println!("  [{}]", cells.join(", "));
        }
        let [a, b, c] = task.coefficients.clone();
        let det = Polynomial::new(vec![c, b, a]);
        println!("  det = {}, roots {:?}", det.to_markup(), task.integer_roots());

        // The same spec always yields the same item.
        let item = instantiate_generated_item(&spec).unwrap();
        assert_eq!(item, instantiate_generated_item(&spec).unwrap());
        let keys: Vec<String> = item
            .fields()
            .map(|(_, f)| format!("{}={}", f.label, format_rational(&f.expected)))
            .collect();
        println!("  item {}: {}\n", item.id, keys.join(" "));
    }
}
