use std::collections::VecDeque;

use num_complex::Complex64;

/// Wynn epsilon extrapolation over a sliding window of partial sums.
///
/// Each call to [`EpsilonTable::push`] rebuilds the triangular table from the
/// window and returns the entry of the highest even column that could be
/// formed. Columns stop at the first near-zero denominator (breakdown), which
/// for an already converged sequence simply returns the converged value.
#[derive(Debug, Clone)]
pub struct EpsilonTable {
    window: VecDeque<Complex64>,
    depth: usize,
    history: Vec<Complex64>,
    breakdowns: usize,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Extrapolation {
    pub value: Complex64,
    /// `|e_k - e_{k-1}| + |e_k - e_{k-2}|` over successive pushes, floored
    /// at a few ulps of the value.
    pub error: f64,
    /// Highest even column used.
    pub column: usize,
}

impl EpsilonTable {
    pub fn new(depth: usize) -> Self {
        assert!(depth >= 3);
        Self {
            window: VecDeque::with_capacity(depth),
            depth,
            history: Vec::new(),
            breakdowns: 0,
        }
    }

    pub fn breakdowns(&self) -> usize {
        self.breakdowns
    }

    pub fn len(&self) -> usize {
        self.window.len()
    }

    pub fn is_empty(&self) -> bool {
        self.window.is_empty()
    }

    pub fn push(&mut self, partial_sum: Complex64) -> Extrapolation {
        if self.window.len() == self.depth {
            self.window.pop_front();
        }
        self.window.push_back(partial_sum);
        let (value, column, broke) = self.extrapolate();
        if broke {
            self.breakdowns += 1;
        }
        self.history.push(value);
        let h = &self.history;
        let k = h.len();
        let error = if k >= 3 {
            (h[k - 1] - h[k - 2]).norm() + (h[k - 1] - h[k - 3]).norm()
        } else {
            f64::INFINITY
        };
        Extrapolation {
            value,
            error: error.max(8.0 * f64::EPSILON * value.norm()),
            column,
        }
    }

    fn extrapolate(&self) -> (Complex64, usize, bool) {
        let seq: Vec<Complex64> = self.window.iter().copied().collect();
        let mut best = *seq.last().expect("window is non-empty");
        let mut best_column = 0;
        let mut previous = vec![Complex64::new(0.0, 0.0); seq.len() + 1];
        let mut current = seq;
        let mut column = 0;
        while current.len() >= 2 {
            let mut next = Vec::with_capacity(current.len() - 1);
            for j in 0..current.len() - 1 {
                let diff = current[j + 1] - current[j];
                let scale = current[j + 1].norm().max(current[j].norm());
                if diff.norm() <= 4.0 * f64::EPSILON * scale || diff.norm() < f64::MIN_POSITIVE {
                    return (best, best_column, true);
                }
                next.push(previous[j + 1] + diff.inv());
            }
            column += 1;
            previous = current;
            current = next;
            if column % 2 == 0 {
                best = *current.last().expect("column is non-empty");
                best_column = column;
            }
        }
        (best, best_column, false)
    }
}
