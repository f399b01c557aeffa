//! Choice of `k+1` well-separated points of `K` inside `(x - eps, x + eps)`.

use std::collections::HashMap;
use std::sync::Mutex;

use serde::{Deserialize, Serialize};

use crate::interpolation::PointSet;
use crate::numerics::Scalar;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Scheme {
    /// Greedy downward walk with gaps at least `eps / 4k`.
    GapWalk,
    /// One point from every second interval of the ladder `t_{j+1} = rho t_j^p`.
    Ladder,
    /// Farthest-point sampling.
    Spread,
}

#[derive(Clone, Debug, PartialEq)]
pub struct Selection {
    /// Ascending indices into `K`.
    pub indices: Vec<usize>,
    pub scheme: Scheme,
}

impl Selection {
    /// `(ln max gap, ln min gap)` of the selected nodes.
    pub fn log_gaps(&self, points: &PointSet<Scalar>) -> (f64, f64) {
        let nodes = points.nodes();
        let first = &nodes[self.indices[0]];
        let last = &nodes[*self.indices.last().unwrap()];
        let max = (last - first).ln_abs_f64();
        let min = self
            .indices
            .windows(2)
            .map(|w| (&nodes[w[1]] - &nodes[w[0]]).ln_abs_f64())
            .fold(f64::INFINITY, f64::min);
        (max, min)
    }
}

/// The exponent `p > 1` with `k p^(2k+1) = k + 1`.
pub fn ladder_exponent(k: usize) -> f64 {
    let k = k as f64;
    ((k + 1.0) / k).powf(1.0 / (2.0 * k + 1.0))
}

/// Selection for a fixed `(eps, k)`; ladder data is cached per anchor.
pub struct Selector<'a> {
    points: &'a PointSet<Scalar>,
    eps: Scalar,
    ln_eps: f64,
    k: usize,
    step: Scalar,
    p: f64,
    ladders: Mutex<HashMap<usize, Option<Vec<usize>>>>,
}

impl<'a> Selector<'a> {
    pub fn new(points: &'a PointSet<Scalar>, eps: &Scalar, k: usize) -> Self {
        assert!(k >= 1, "k must be positive");
        Selector {
            points,
            eps: eps.clone(),
            ln_eps: eps.ln_abs_f64(),
            k,
            step: eps / &Scalar::from_i64(4 * k as i64),
            p: ladder_exponent(k),
            ladders: Mutex::new(HashMap::new()),
        }
    }

    /// Window `K ∩ (x - eps, x + eps)` as an index range.
    pub fn window(&self, x: &Scalar) -> std::ops::Range<usize> {
        self.points.open_range(&(x - &self.eps), &(x + &self.eps))
    }

    pub fn select(&self, x: &Scalar) -> Option<Selection> {
        let window = self.window(x);
        if window.len() < self.k + 1 {
            return None;
        }
        if let Some(indices) = self.gap_walk(x, &window) {
            return Some(Selection {
                indices,
                scheme: Scheme::GapWalk,
            });
        }
        let anchor = window.start;
        let cached = self.ladders.lock().unwrap().get(&anchor).cloned();
        let ladder = match cached {
            Some(l) => l,
            None => {
                let l = self.ladder(anchor);
                self.ladders.lock().unwrap().insert(anchor, l.clone());
                l
            }
        };
        if let Some(indices) = ladder {
            return Some(Selection {
                indices,
                scheme: Scheme::Ladder,
            });
        }
        Some(Selection {
            indices: self.spread(&window),
            scheme: Scheme::Spread,
        })
    }

    fn gap_walk(&self, x: &Scalar, window: &std::ops::Range<usize>) -> Option<Vec<usize>> {
        let mut idx = self.points.position(x)?;
        let mut out = vec![idx];
        for _ in 0..self.k {
            let bound = &self.points.nodes()[idx] - &self.step;
            let next = self.points.last_at_most(&bound)?;
            if next < window.start {
                return None;
            }
            out.push(next);
            idx = next;
        }
        out.reverse();
        Some(out)
    }

    fn log_dist(&self, anchor: usize, i: usize) -> f64 {
        let nodes = self.points.nodes();
        (&nodes[i] - &nodes[anchor]).ln_abs_f64()
    }

    /// Ladder anchored at the window minimum; distances are measured from the anchor.
    fn ladder(&self, anchor: usize) -> Option<Vec<usize>> {
        let n = self.points.len();
        // all points at distance < eps from the anchor
        let mut end = anchor + 1;
        while end < n && self.log_dist(anchor, end) < self.ln_eps {
            end += 1;
        }
        if end == anchor + 1 {
            return None;
        }
        let logs: Vec<f64> = (anchor + 1..end).map(|i| self.log_dist(anchor, i)).collect();
        // ln rho = min(ln 1/2, min over consecutive (v, u) of ln v - p ln u)
        let mut ln_rho = -std::f64::consts::LN_2;
        for i in anchor + 1..end {
            if i + 1 < n {
                let v = logs[i - anchor - 1];
                let u = if i + 1 < end {
                    logs[i - anchor]
                } else {
                    self.log_dist(anchor, i + 1)
                };
                ln_rho = ln_rho.min(v - self.p * u);
            }
        }
        let mut lt = vec![self.ln_eps];
        for j in 0..2 * self.k + 1 {
            lt.push(ln_rho + self.p * lt[j]);
        }
        let mut out = Vec::with_capacity(self.k + 1);
        for j in 0..=self.k {
            let (hi, lo) = (lt[2 * j], lt[2 * j + 1]);
            // largest distance below hi
            let pos = logs.partition_point(|&l| l < hi);
            if pos == 0 || logs[pos - 1] < lo {
                return None;
            }
            out.push(anchor + pos);
        }
        out.reverse();
        Some(out)
    }

    /// Farthest-point sampling seeded with the window's extremes.
    fn spread(&self, window: &std::ops::Range<usize>) -> Vec<usize> {
        let nodes = self.points.nodes();
        let mut chosen = vec![window.start, window.end - 1];
        let two = Scalar::from_i64(2);
        while chosen.len() < self.k + 1 {
            let mut best: Option<(Scalar, usize)> = None;
            for w in chosen.windows(2) {
                let (a, b) = (w[0], w[1]);
                if b - a < 2 {
                    continue;
                }
                let mid = (&nodes[a] + &nodes[b]) / &two;
                let split = self.points.last_at_most(&mid).unwrap().clamp(a, b - 1);
                for c in [split, split + 1] {
                    if c <= a || c >= b {
                        continue;
                    }
                    let d = (&nodes[c] - &nodes[a]).min(&nodes[b] - &nodes[c]);
                    let better = match &best {
                        None => true,
                        Some((bd, bi)) => d > *bd || (d == *bd && c < *bi),
                    };
                    if better {
                        best = Some((d, c));
                    }
                }
            }
            let (_, c) = best.expect("window holds at least k+1 points");
            let at = chosen.partition_point(|&i| i < c);
            chosen.insert(at, c);
        }
        chosen
    }
}

/// One-shot selection; see [`Selector`].
pub fn select_regular_points(
    points: &PointSet<Scalar>,
    x: &Scalar,
    eps: &Scalar,
    k: usize,
) -> Option<Selection> {
    Selector::new(points, eps, k).select(x)
}
