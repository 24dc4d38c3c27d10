#![allow(dead_code)]

use limfourier::measure::{FiniteSequence, StepFunction};
use limfourier::Complex64;
use proptest::prelude::*;

fn complex() -> impl Strategy<Value = Complex64> {
    (-5.0f64..5.0, -5.0f64..5.0).prop_map(|(re, im)| Complex64::new(re, im))
}

/// Step functions on random partitions, occasionally with repeated values.
pub fn step_function() -> impl Strategy<Value = StepFunction> {
    prop::collection::vec((0.05f64..1.0, complex(), any::<bool>()), 1..12).prop_map(|cells| {
        let total: f64 = cells.iter().map(|c| c.0).sum();
        let mut breakpoints = vec![0.0];
        let mut acc = 0.0;
        let mut values = Vec::new();
        for (i, (w, v, repeat)) in cells.iter().enumerate() {
            acc += w / total;
            breakpoints.push(acc);
            values.push(if *repeat && i > 0 { values[i - 1] } else { *v });
        }
        *breakpoints.last_mut().unwrap() = 1.0;
        StepFunction::new(breakpoints, values).unwrap()
    })
}

pub fn uniform_values(max: usize) -> impl Strategy<Value = Vec<Complex64>> {
    prop::collection::vec(complex(), 1..max)
}

pub fn sequence(max: usize) -> impl Strategy<Value = FiniteSequence> {
    uniform_values(max).prop_map(|v| FiniteSequence::new(v).unwrap())
}

pub fn rel(a: f64, b: f64) -> f64 {
    if a == b {
        0.0
    } else {
        (a - b).abs() / a.abs().max(b.abs())
    }
}
