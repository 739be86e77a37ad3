//! Right-continuous integer step functions on a closed interval.

use crate::error::{Error, Result};

/// Piecewise-constant cadlag function on `[start, end]`.
///
/// The value on `[breakpoints[i], breakpoints[i+1])` is `values[i]`; the last
/// segment is closed at `end`. Adjacent values always differ.
#[derive(Debug, Clone, PartialEq)]
pub struct StepProfile {
    breakpoints: Vec<f64>,
    values: Vec<u64>,
    end: f64,
}

impl StepProfile {
    /// Canonical profile of the counting function `s ↦ #{i : s ∈ I_i}` for
    /// intervals `I_i = [lo_i, hi_i)` inside `[start, end]`. Intervals with
    /// `hi_i == end` are closed on the right.
    pub fn from_intervals<I>(start: f64, end: f64, intervals: I) -> Self
    where
        I: IntoIterator<Item = (f64, f64)>,
    {
        let mut events: Vec<(f64, i64)> = Vec::new();
        for (lo, hi) in intervals {
            events.push((lo, 1));
            if hi < end {
                events.push((hi, -1));
            }
        }
        events.sort_unstable_by(|a, b| a.0.total_cmp(&b.0));

        let mut breakpoints = vec![start];
        let mut values = vec![0u64];
        let mut level: i64 = 0;
        let mut i = 0;
        while i < events.len() {
            let at = events[i].0;
            while i < events.len() && events[i].0 == at {
                level += events[i].1;
                i += 1;
            }
            let value = level as u64;
            if at <= start {
                *values.last_mut().expect("non-empty") = value;
            } else if *values.last().expect("non-empty") != value {
                breakpoints.push(at);
                values.push(value);
            }
        }
        StepProfile {
            breakpoints,
            values,
            end,
        }
    }

    pub fn breakpoints(&self) -> &[f64] {
        &self.breakpoints
    }

    pub fn values(&self) -> &[u64] {
        &self.values
    }

    pub fn start(&self) -> f64 {
        self.breakpoints[0]
    }

    pub fn end(&self) -> f64 {
        self.end
    }

    /// Value at `s`.
    pub fn eval(&self, s: f64) -> Result<u64> {
        if !(self.start() <= s && s <= self.end) {
            return Err(Error::Domain {
                name: "s",
                value: s,
                domain: "the profile's interval",
            });
        }
        let i = self.breakpoints.partition_point(|&b| b <= s);
        Ok(self.values[i - 1])
    }

    /// Segments as `(left, right, value)`; the last one is closed at `end`.
    pub fn segments(&self) -> impl Iterator<Item = (f64, f64, u64)> + '_ {
        (0..self.values.len()).map(move |i| {
            let right = self.breakpoints.get(i + 1).copied().unwrap_or(self.end);
            (self.breakpoints[i], right, self.values[i])
        })
    }

    /// Maximum value and the first segment attaining it.
    pub fn supremum(&self) -> (u64, (f64, f64)) {
        let mut best = (0, (self.start(), self.end));
        for (i, (left, right, value)) in self.segments().enumerate() {
            if i == 0 || value > best.0 {
                best = (value, (left, right));
            }
        }
        best
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn single_interval_covers_everything() {
        let p = StepProfile::from_intervals(0.0, 1.0, [(0.0, 1.0)]);
        assert_eq!(p.breakpoints(), &[0.0]);
        assert_eq!(p.values(), &[1]);
        assert_eq!(p.eval(1.0).unwrap(), 1);
        assert_eq!(p.supremum(), (1, (0.0, 1.0)));
    }

    #[test]
    fn empty_profile_is_zero() {
        let p = StepProfile::from_intervals(0.0, 1.0, std::iter::empty());
        assert_eq!(p.values(), &[0]);
        assert_eq!(p.eval(0.3).unwrap(), 0);
    }

    #[test]
    fn merges_equal_neighbours() {
        // [0,1] + [0,0.5) + [0.25,0.5) + [0,0.25): value 3 on [0,0.5), 1 on [0.5,1]
        let p = StepProfile::from_intervals(0.0, 1.0, [(0.0, 1.0), (0.0, 0.5), (0.25, 0.5), (0.0, 0.25)]);
        assert_eq!(p.breakpoints(), &[0.0, 0.5]);
        assert_eq!(p.values(), &[3, 1]);
        assert_eq!(p.eval(0.49).unwrap(), 3);
        assert_eq!(p.eval(0.5).unwrap(), 1);
        assert!(p.eval(1.01).is_err());
        assert!(p.eval(-0.01).is_err());
    }

    #[test]
    fn supremum_picks_first_maximum() {
        let p = StepProfile::from_intervals(0.0, 1.0, [(0.0, 1.0), (0.1, 0.2), (0.6, 0.7)]);
        assert_eq!(p.supremum(), (2, (0.1, 0.2)));
        let segs: Vec<_> = p.segments().collect();
        assert_eq!(segs.len(), 5);
        assert_eq!(segs[4], (0.7, 1.0, 1));
    }

    #[test]
    fn shifted_domain() {
        let p = StepProfile::from_intervals(-0.5, 1.0, [(-0.5, 1.0), (-0.5, 0.0)]);
        assert_eq!(p.eval(-0.5).unwrap(), 2);
        assert_eq!(p.eval(0.0).unwrap(), 1);
    }
}
