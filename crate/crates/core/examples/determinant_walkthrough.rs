//! The worked determinant equation `det [[x+4, 5, 3], [-5, x-6, -2], [1, 1, 1]] = 0`,
//! solved step by step and graded.
//!
//! ```text
//! cargo run --example determinant_walkthrough
//! ```

use stepwise::assessment::{grade, walkthrough_item, Item, OrderingPolicy, Submission};
use stepwise::mathcore::rational::{format_rational, int};
use stepwise::mathcore::{det_cofactor, solve_quadratic, walkthrough_matrix};

fn main() {
    let matrix = walkthrough_matrix();
    let det = det_cofactor(&matrix);
    println!("det = {}", det.to_markup());

    let [c, b, a] = [det.coeff(0), det.coeff(1), det.coeff(2)];
    let roots = solve_quadratic(&a, &b, &c).expect("quadratic");
    let exact = roots.exact_roots().expect("rational roots");
    println!(
        "roots: {}",
        exact.iter().map(format_rational).collect::<Vec<_>>().join(", ")
    );

    let item = walkthrough_item();
    println!("\n{}", item.prompt);
    for (n, step) in item.steps.iter().enumerate() {
        let labels: Vec<&str> = step.fields.iter().map(|f| f.label.as_str()).collect();
        println!("  step {}: {} [{}]", n + 1, step.prompt, labels.join(" "));
    }

    // Roots typed in either order earn full credit.
    for answers in [["1", "-3", "2", "1", "2"], ["1", "-3", "2", "2", "1"], ["1", "3", "2", "1", "2"]] {
        let sub = Submission::fields(&item.id, ["E", "F", "G", "H", "I"].into_iter().zip(answers));
        let result = grade(&Item::Stepwise(item.clone()), &sub, OrderingPolicy::AnyOrder).unwrap();
        println!("\nanswers {answers:?} -> score {}", format_rational(&result.score));
        for part in result.parts.iter().filter(|p| p.verdict != stepwise::assessment::Verdict::Correct) {
            println!("  {}: {}", part.label, part.feedback);
        }
    }
    assert_eq!(det.coeff(2), int(1));
}
