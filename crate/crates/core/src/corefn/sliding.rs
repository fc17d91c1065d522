use std::collections::VecDeque;

use super::grid::ScalarProfile;
use crate::error::{Error, Result};

/// `x ↦ max { v(y) : |y - x| ≤ radius }` over grid points, in `O(n)`.
pub fn sliding_sup(v: &ScalarProfile, radius: f64) -> Result<ScalarProfile> {
    check_radius(radius)?;
    let pts = v.grid().points();
    let vals = v.values();
    let n = pts.len();
    let mut out = Vec::with_capacity(n);
    // indices with strictly decreasing values
    let mut deque: VecDeque<usize> = VecDeque::new();
    let mut next = 0usize;
    for &x in pts {
        while next < n && pts[next] - x <= radius {
            while let Some(&back) = deque.back() {
                if vals[back] <= vals[next] {
                    deque.pop_back();
                } else {
                    break;
                }
            }
            deque.push_back(next);
            next += 1;
        }
        while let Some(&front) = deque.front() {
            if x - pts[front] > radius {
                deque.pop_front();
            } else {
                break;
            }
        }
        // x itself is always inside its own window
        out.push(vals[*deque.front().expect("window contains its centre")]);
    }
    ScalarProfile::new(v.grid().clone(), out)
}

/// `x ↦ (Σ_{|y-x| ≤ radius} w_y |v(y)|^r)^{1/r}` in amortized `O(n)`.
///
/// Terms are scaled by `max |v|` and windows are summed without subtraction,
/// so large `r` neither overflows nor cancels.
pub fn sliding_power_sum(v: &ScalarProfile, radius: f64, r: f64) -> Result<ScalarProfile> {
    check_radius(radius)?;
    if !(r >= 1.0) || !r.is_finite() {
        return Err(Error::InvalidQ(r));
    }
    let pts = v.grid().points();
    let n = pts.len();
    let scale = v.max_abs();
    if scale == 0.0 {
        return ScalarProfile::new(v.grid().clone(), vec![0.0; n]);
    }
    let terms: Vec<f64> = v
        .grid()
        .weights()
        .iter()
        .zip(v.values())
        .map(|(w, x)| w * (x.abs() / scale).powf(r))
        .collect();
    let mut window = WindowSum::default();
    let mut out = Vec::with_capacity(n);
    let (mut lo, mut hi) = (0usize, 0usize);
    for &x in pts {
        while hi < n && pts[hi] - x <= radius {
            window.push(terms[hi]);
            hi += 1;
        }
        while x - pts[lo] > radius {
            window.pop();
            lo += 1;
        }
        out.push(scale * window.sum().powf(1.0 / r));
    }
    ScalarProfile::new(v.grid().clone(), out)
}

/// FIFO of nonnegative terms with subtraction-free window sums: the front
/// stack stores suffix sums, the back stack a running total.
#[derive(Default)]
struct WindowSum {
    front: Vec<f64>,
    back: Vec<f64>,
    back_sum: f64,
}

impl WindowSum {
    fn push(&mut self, t: f64) {
        self.back.push(t);
        self.back_sum += t;
    }

    fn pop(&mut self) {
        if self.front.is_empty() {
            let mut acc = 0.0;
            while let Some(t) = self.back.pop() {
                acc += t;
                self.front.push(acc);
            }
            self.back_sum = 0.0;
        }
        self.front.pop();
    }

    fn sum(&self) -> f64 {
        self.front.last().copied().unwrap_or(0.0) + self.back_sum
    }
}

fn check_radius(radius: f64) -> Result<()> {
    if radius > 0.0 && radius.is_finite() {
        Ok(())
    } else {
        Err(Error::NonPositiveRadius(radius))
    }
}
