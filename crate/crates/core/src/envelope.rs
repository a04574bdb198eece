//! Upper concave envelope of a function sampled on a finite, increasing grid.
//!
//! The envelope of `g` over the grid is the smallest concave function
//! dominating the sampled points; it equals the one-step robust value
//! `sup { Σ p_i g(x_i) : p ≥ 0, Σ p = 1, Σ p_i x_i = x }` over martingale
//! kernels supported on the grid, which is why the dynamic programme and the
//! LP dual keep meeting it.
//!
//! Built with a monotone-chain scan; collinear points are kept on the hull.

use crate::error::{Error, Result};
use crate::scalar::Scalar;

#[derive(Clone, Debug)]
pub struct UpperEnvelope<S> {
    vertices: Vec<(S, S)>,
}

/// Upper hull of `(x, y)` samples; `xs` must be strictly increasing.
pub fn upper_concave_envelope<S: Scalar>(xs: &[S], ys: &[S]) -> Result<UpperEnvelope<S>> {
    if xs.is_empty() || xs.len() != ys.len() {
        return Err(Error::domain("envelope needs matching, non-empty grids"));
    }
    if !xs.windows(2).all(|w| w[0] < w[1]) {
        return Err(Error::domain("envelope grid must be strictly increasing"));
    }
    let mut hull: Vec<(S, S)> = Vec::with_capacity(xs.len());
    for (x, y) in xs.iter().zip(ys) {
        let p = (x.clone(), y.clone());
        // Pop the middle point while it lies strictly below the chord.
        while hull.len() >= 2 {
            let b = &hull[hull.len() - 1];
            let a = &hull[hull.len() - 2];
            let cross = (b.0.clone() - a.0.clone()) * (p.1.clone() - a.1.clone())
                - (b.1.clone() - a.1.clone()) * (p.0.clone() - a.0.clone());
            if cross > S::zero() {
                hull.pop();
            } else {
                break;
            }
        }
        hull.push(p);
    }
    Ok(UpperEnvelope { vertices: hull })
}

impl<S: Scalar> UpperEnvelope<S> {
    pub fn vertices(&self) -> &[(S, S)] {
        &self.vertices
    }

    /// Envelope value: linear interpolation between hull vertices, extended
    /// linearly beyond the first and last vertex.
    pub fn value(&self, x: &S) -> S {
        let v = &self.vertices;
        if v.len() == 1 {
            return v[0].1.clone();
        }
        let seg = self.segment_for(x);
        let (x0, y0) = &v[seg];
        let (x1, y1) = &v[seg + 1];
        let slope = (y1.clone() - y0.clone()) / (x1.clone() - x0.clone());
        y0.clone() + slope * (x.clone() - x0.clone())
    }

    /// Super-differential interval at `x` as `(right_slope, left_slope)`,
    /// with `right ≤ left`. Inside a segment the two coincide; beyond the
    /// hull ends the nearest segment's slope is used (linear extension).
    pub fn slopes(&self, x: &S) -> (S, S) {
        let v = &self.vertices;
        if v.len() == 1 {
            return (S::zero(), S::zero());
        }
        let seg = self.segment_for(x);
        let slope_of = |i: usize| {
            let (x0, y0) = &v[i];
            let (x1, y1) = &v[i + 1];
            (y1.clone() - y0.clone()) / (x1.clone() - x0.clone())
        };
        let s = slope_of(seg);
        // At an interior vertex the kink exposes both one-sided slopes.
        if *x == v[seg].0 && seg > 0 {
            (s, slope_of(seg - 1))
        } else if *x == v[seg + 1].0 && seg + 2 < v.len() {
            (slope_of(seg + 1), s)
        } else {
            (s.clone(), s)
        }
    }

    /// Concavity defect of the vertex chain: the largest increase between
    /// consecutive slopes (non-positive for a genuinely concave hull).
    pub fn concavity_defect(&self) -> S {
        let v = &self.vertices;
        let mut worst = S::zero() - S::one();
        for w in v.windows(3) {
            let s0 = (w[1].1.clone() - w[0].1.clone()) / (w[1].0.clone() - w[0].0.clone());
            let s1 = (w[2].1.clone() - w[1].1.clone()) / (w[2].0.clone() - w[1].0.clone());
            let d = s1 - s0;
            if d > worst {
                worst = d;
            }
        }
        worst
    }

    fn segment_for(&self, x: &S) -> usize {
        let v = &self.vertices;
        if *x <= v[0].0 {
            return 0;
        }
        if *x >= v[v.len() - 1].0 {
            return v.len() - 2;
        }
        let mut lo = 0;
        let mut hi = v.len() - 1;
        while lo + 1 < hi {
            let mid = (lo + hi) / 2;
            if v[mid].0 <= *x {
                lo = mid;
            } else {
                hi = mid;
            }
        }
        lo
    }
}
