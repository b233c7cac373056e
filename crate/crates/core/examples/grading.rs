//! Partial credit across the three item types of the committed bank.
//!
//! ```text
//! cargo run --example grading
//! ```

use stepwise::assessment::{grade, BankDocument, Item, OrderingPolicy, Submission};
use stepwise::mathcore::rational::format_rational;

fn show(item: &Item, sub: &Submission) {
    let result = grade(item, sub, OrderingPolicy::AnyOrder).expect("gradable");
    println!("{} -> {}", item.id(), format_rational(&result.score));
    for part in &result.parts {
        println!("  {:<8} {:?}: {}", part.label, part.verdict, part.feedback);
    }
}

fn main() {
    let bank = BankDocument::parse(include_str!("../banks/determinants.json")).expect("bank");

    let cofactor = bank.find("minor-cofactor").unwrap();
    show(cofactor, &Submission::fields("minor-cofactor", [("M", "8"), ("K", "8")]));
    show(cofactor, &Submission::fields("minor-cofactor", [("M", "16/2"), ("K", "-8.0")]));

    let mc = bank.find("bounds-mc").unwrap();
    show(mc, &Submission::choice("bounds-mc", 0));
    show(mc, &Submission::choice("bounds-mc", 2));

    // Each slot is worth 1/slots.
    let dd = bank.find("bounds-dd").unwrap();
    show(dd, &Submission::placements("bounds-dd", [("a", "-2"), ("b", "2"), ("c", "4"), ("d", "x^2")]));

    let walk = bank.find("det-walkthrough").unwrap();
    let typo = Submission::fields("det-walkthrough", [("E", "1"), ("F", "-3"), ("G", "two"), ("H", "2")]);
    show(walk, &typo);
    match grade(walk, &Submission::choice("det-walkthrough", 0), OrderingPolicy::AnyOrder) {
        Ok(_) => unreachable!(),
        Err(e) => println!("wrong payload kind: {e}"),
    }
}
