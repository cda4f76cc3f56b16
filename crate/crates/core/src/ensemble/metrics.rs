use serde::Serialize;

use crate::error::{Error, Result};

/// Confusion counts with label 1 as the positive class.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize)]
pub struct Confusion {
    pub tp: u64,
    pub fn_: u64,
    pub fp: u64,
    pub tn: u64,
}

impl Confusion {
    pub fn total(&self) -> u64 {
        self.tp + self.fn_ + self.fp + self.tn
    }

    pub fn metrics(&self) -> Metrics {
        let ratio = |a: u64, b: u64| if b == 0 { 0.0 } else { a as f64 / b as f64 };
        Metrics {
            confusion: *self,
            accuracy: ratio(self.tp + self.tn, self.total()),
            sensitivity: ratio(self.tp, self.tp + self.fn_),
            specificity: ratio(self.tn, self.tn + self.fp),
        }
    }
}

/// Ratios are 0 when their denominator is empty.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Metrics {
    pub confusion: Confusion,
    pub accuracy: f64,
    pub sensitivity: f64,
    pub specificity: f64,
}

pub fn evaluate(predictions: &[u8], labels: &[u8]) -> Result<Metrics> {
    if predictions.len() != labels.len() {
        return Err(Error::LengthMismatch(predictions.len(), labels.len()));
    }
    if predictions.is_empty() {
        return Err(Error::EmptyEvaluation);
    }
    let mut c = Confusion::default();
    for (&p, &l) in predictions.iter().zip(labels) {
        match (p == 1, l == 1) {
            (true, true) => c.tp += 1,
            (false, true) => c.fn_ += 1,
            (true, false) => c.fp += 1,
            (false, false) => c.tn += 1,
        }
    }
    Ok(c.metrics())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn all_correct() {
        let m = evaluate(&[1, 0, 1], &[1, 0, 1]).unwrap();
        assert_eq!(m.accuracy, 1.0);
        assert_eq!(m.confusion, Confusion { tp: 2, fn_: 0, fp: 0, tn: 1 });
    }

    #[test]
    fn mismatched_and_empty() {
        assert!(matches!(evaluate(&[1], &[1, 0]), Err(Error::LengthMismatch(1, 2))));
        assert!(matches!(evaluate(&[], &[]), Err(Error::EmptyEvaluation)));
    }

    #[test]
    fn counts_to_ratios() {
        let m = Confusion { tp: 72, fn_: 1, fp: 31, tn: 1616 }.metrics();
        assert_eq!(format!("{:.2}", m.accuracy * 100.0), "98.14");
        assert_eq!(format!("{:.2}", m.sensitivity * 100.0), "98.63");
        assert_eq!(format!("{:.2}", m.specificity * 100.0), "98.12");
    }
}
