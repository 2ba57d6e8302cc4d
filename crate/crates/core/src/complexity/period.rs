use std::fmt;

/// A profile of the form `preperiod · period^ω` on its verified range.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct EventualPeriod {
    pub preperiod: Vec<usize>,
    pub period: Vec<usize>,
}

impl EventualPeriod {
    /// The value predicted at index `n`.
    pub fn at(&self, n: usize) -> usize {
        if n < self.preperiod.len() {
            self.preperiod[n]
        } else {
            self.period[(n - self.preperiod.len()) % self.period.len()]
        }
    }
}

/// Renders as `1 3 4 (3 5 5)^ω`.
impl fmt::Display for EventualPeriod {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for v in &self.preperiod {
            write!(f, "{v} ")?;
        }
        let body: Vec<String> = self.period.iter().map(usize::to_string).collect();
        write!(f, "({})^ω", body.join(" "))
    }
}

/// Smallest preperiod, then smallest period, that explains all of
/// `values` with at least three full repetitions of the period.
pub fn detect_eventual_period(
    values: &[usize],
    max_preperiod: usize,
    max_period: usize,
) -> Option<EventualPeriod> {
    for q in 0..=max_preperiod.min(values.len()) {
        let tail = &values[q..];
        for p in 1..=max_period {
            if tail.len() < 3 * p {
                break;
            }
            if tail.iter().skip(p).zip(tail).all(|(a, b)| a == b) {
                return Some(EventualPeriod {
                    preperiod: values[..q].to_vec(),
                    period: tail[..p].to_vec(),
                });
            }
        }
    }
    None
}
