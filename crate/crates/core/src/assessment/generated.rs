//! Two-step determinant-equation items: coefficients first, then roots.

use crate::mathcore::rational::{ratio, Rational};
use crate::mathcore::{
    det_task_from_matrix, generate_det_task, walkthrough_matrix, DetTask, DetTaskSpec, IntRange,
    MathError, PolyMatrix,
};

use super::item::{FieldKey, RevealMode, Step, StepwiseItem};

pub const COEFFICIENT_LABELS: [&str; 3] = ["E", "F", "G"];
pub const ROOT_LABELS: [&str; 2] = ["H", "I"];
pub const ROOT_GROUP: &str = "roots";

pub const WALKTHROUGH_ITEM_ID: &str = "det-walkthrough";

/// LaTeX for `| m | = 0`.
pub fn determinant_equation_markup(matrix: &PolyMatrix) -> String {
    let cols = "c".repeat(matrix.dim());
    let body = matrix
        .rows()
        .map(|row| row.iter().map(ToString::to_string).collect::<Vec<_>>().join(" & "))
        .collect::<Vec<_>>()
        .join(" \\\\ ");
    format!("\\left| \\begin{{array}}{{{cols}}} {body} \\end{{array}} \\right| = 0")
}

fn field(label: &str, expected: &Rational, group: Option<&str>) -> FieldKey {
    FieldKey {
        label: label.to_string(),
        expected: expected.clone(),
        weight: ratio(1, 5),
        group: group.map(str::to_string),
        feedback: None,
        difficulty: None,
    }
}

/// Wraps an accepted task in the two-step shape with equal field weights.
pub fn stepwise_item_from_task(id: &str, task: &DetTask) -> StepwiseItem {
    let roots = task
        .roots
        .exact_roots()
        .expect("accepted tasks have rational roots");
    let coefficient_fields = COEFFICIENT_LABELS
        .iter()
        .zip(&task.coefficients)
        .map(|(label, c)| field(label, c, None))
        .collect();
    let root_fields = ROOT_LABELS
        .iter()
        .zip(&roots)
        .map(|(label, r)| field(label, r, Some(ROOT_GROUP)))
        .collect();
    StepwiseItem {
        id: id.to_string(),
        prompt: format!(
            "Solve the equation $${}$$",
            determinant_equation_markup(&task.matrix)
        ),
        steps: vec![
            Step {
                prompt: "Step 1: Compute the determinant. $\\text{Determinant} = (E)\\,x^2 + (F)\\,x + (G)$"
                    .to_string(),
                fields: coefficient_fields,
            },
            Step {
                prompt: "Step 2: Solve the quadratic equation and give the roots in ascending order. $x_1 = (H),\\ x_2 = (I)$"
                    .to_string(),
                fields: root_fields,
            },
        ],
        reveal_mode: RevealMode::AllAtOnce,
    }
}

/// Generates a task from `spec` and wraps it as an item with id `det-<seed>`.
pub fn instantiate_generated_item(spec: &DetTaskSpec) -> Result<StepwiseItem, MathError> {
    let task = generate_det_task(spec)?;
    Ok(stepwise_item_from_task(&format!("det-{:016x}", spec.seed), &task))
}

/// The fixed item built on `[[x+4, 5, 3], [-5, x-6, -2], [1, 1, 1]]`.
pub fn walkthrough_item() -> StepwiseItem {
    let task = det_task_from_matrix(walkthrough_matrix(), IntRange::new(-9, 9))
        .expect("walkthrough matrix has roots 1 and 2");
    stepwise_item_from_task(WALKTHROUGH_ITEM_ID, &task)
}
