//! Exhaustive input trace enumeration in a fixed, platform-independent
//! order: lexicographic over (tick, channel name alphabetical, domain order).

use crate::error::{Error, Result};
use crate::model::{Interface, Value};
use crate::semantics::budget::Budget;
use crate::semantics::{Assignment, Trace};

/// Iterator over every input trace of `iface` with the given horizon.
#[derive(Debug, Clone)]
pub struct InputTraces {
    channels: Vec<(String, Vec<Value>)>,
    horizon: usize,
    /// Odometer digits, tick-major then channel order; rightmost advances
    /// fastest. `None` once exhausted.
    digits: Option<Vec<usize>>,
    total: u64,
}

/// Enumerate all `(∏ domain sizes)^horizon` input traces. Fails with a
/// budget error when that count exceeds the enumeration cap.
pub fn enumerate_input_traces(
    iface: &Interface,
    horizon: usize,
    budget: &Budget,
) -> Result<InputTraces> {
    budget.check_horizon(horizon)?;
    let channels: Vec<(String, Vec<Value>)> = iface
        .inputs
        .iter()
        .map(|(name, domain)| (name.clone(), domain.values()))
        .collect();

    let per_tick: u64 = channels
        .iter()
        .map(|(_, values)| values.len() as u64)
        .product();
    let mut total: u64 = 1;
    for _ in 0..horizon {
        total = total.saturating_mul(per_tick);
    }
    if total > budget.enumeration_cap {
        return Err(Error::Budget(format!(
            "{total} input traces exceed the cap of {}",
            budget.enumeration_cap
        )));
    }

    Ok(InputTraces {
        digits: Some(vec![0; channels.len() * horizon]),
        channels,
        horizon,
        total,
    })
}

impl InputTraces {
    /// Number of traces the iterator will yield in total.
    pub fn total(&self) -> u64 {
        self.total
    }
}

impl Iterator for InputTraces {
    type Item = Trace;

    fn next(&mut self) -> Option<Trace> {
        let digits = self.digits.as_mut()?;
        let mut frames = Vec::with_capacity(self.horizon);
        for t in 0..self.horizon {
            let mut frame = Assignment::new();
            for (c, (name, values)) in self.channels.iter().enumerate() {
                let d = digits[t * self.channels.len() + c];
                frame.set(name.clone(), values[d].clone());
            }
            frames.push(frame);
        }
        let trace = Trace::from_frames(frames).expect("enumerated frames are uniform");

        // Advance the odometer; retire the iterator on wrap-around. A closed
        // interface has no digits and yields exactly one trace.
        let mut pos = digits.len();
        loop {
            if pos == 0 {
                self.digits = None;
                break;
            }
            pos -= 1;
            let channel = pos % self.channels.len();
            digits[pos] += 1;
            if digits[pos] < self.channels[channel].1.len() {
                break;
            }
            digits[pos] = 0;
        }
        Some(trace)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::ValueDomain;
    use std::collections::BTreeMap;

    fn iface(inputs: Vec<(&str, ValueDomain)>) -> Interface {
        Interface {
            inputs: inputs
                .into_iter()
                .map(|(n, d)| (n.to_string(), d))
                .collect(),
            outputs: BTreeMap::new(),
        }
    }

    #[test]
    fn declared_label_order_comes_first() {
        let i = iface(vec![(
            "btn",
            ValueDomain::Enumeration(vec!["press".into(), "idle".into()]),
        )]);
        let traces: Vec<Trace> =
            enumerate_input_traces(&i, 1, &Budget::default()).unwrap().collect();
        assert_eq!(traces.len(), 2);
        assert_eq!(traces[0].dump(), "t=0 btn=press\n");
        assert_eq!(traces[1].dump(), "t=0 btn=idle\n");
    }

    #[test]
    fn two_binary_inputs_h2_gives_16() {
        let i = iface(vec![
            ("a", ValueDomain::Enumeration(vec!["x".into(), "y".into()])),
            ("b", ValueDomain::Enumeration(vec!["x".into(), "y".into()])),
        ]);
        let it = enumerate_input_traces(&i, 2, &Budget::default()).unwrap();
        assert_eq!(it.total(), 16);
        assert_eq!(it.count(), 16);
    }

    #[test]
    fn int_domain_h2_gives_16() {
        let i = iface(vec![("speed", ValueDomain::BoundedInt { lo: 0, hi: 3 })]);
        let it = enumerate_input_traces(&i, 2, &Budget::default()).unwrap();
        assert_eq!(it.count(), 16);
    }

    #[test]
    fn budget_guard() {
        let i = iface(vec![("n", ValueDomain::BoundedInt { lo: 0, hi: 63 })]);
        let err = enumerate_input_traces(&i, 6, &Budget::default()).unwrap_err();
        assert!(err.is_budget());
    }

    #[test]
    fn closed_interface_has_one_trace() {
        let i = iface(vec![]);
        let traces: Vec<Trace> =
            enumerate_input_traces(&i, 3, &Budget::default()).unwrap().collect();
        assert_eq!(traces.len(), 1);
        assert_eq!(traces[0].horizon(), 3);
    }

    #[test]
    fn order_is_lexicographic() {
        let i = iface(vec![("n", ValueDomain::BoundedInt { lo: 0, hi: 1 })]);
        let traces: Vec<Trace> =
            enumerate_input_traces(&i, 2, &Budget::default()).unwrap().collect();
        let dumps: Vec<String> = traces.iter().map(Trace::dump).collect();
        assert_eq!(
            dumps,
            vec![
                "t=0 n=0\nt=1 n=0\n",
                "t=0 n=0\nt=1 n=1\n",
                "t=0 n=1\nt=1 n=0\n",
                "t=0 n=1\nt=1 n=1\n",
            ]
        );
        let mut sorted = traces.clone();
        sorted.sort();
        assert_eq!(sorted, traces);
    }
}
