//! Finite-difference weights on uniform grids.

/// Fornberg's recursion: weights `w[d][k]` such that `f^(d)(x0) ~ sum_k w[d][k] f(nodes[k])`
/// for every derivative order `d <= max_order`.
pub fn fornberg_weights(x0: f64, nodes: &[f64], max_order: usize) -> Vec<Vec<f64>> {
    let n = nodes.len();
    let mut c = vec![vec![0.0; n]; max_order + 1];
    c[0][0] = 1.0;
    let mut c1 = 1.0;
    let mut c4 = nodes[0] - x0;
    for i in 1..n {
        let mn = i.min(max_order);
        let mut c2 = 1.0;
        let c5 = c4;
        c4 = nodes[i] - x0;
        for j in 0..i {
            let c3 = nodes[i] - nodes[j];
            c2 *= c3;
            if j == i - 1 {
                for k in (1..=mn).rev() {
                    c[k][i] = c1 * (k as f64 * c[k - 1][i - 1] - c5 * c[k][i - 1]) / c2;
                }
                c[0][i] = -c1 * c5 * c[0][i - 1] / c2;
            }
            for k in (1..=mn).rev() {
                c[k][j] = (c4 * c[k][j] - k as f64 * c[k - 1][j]) / c3;
            }
            c[0][j] = c4 * c[0][j] / c3;
        }
        c1 = c2;
    }
    c
}

/// Derivative operator of accuracy `order` for derivatives `0..=max_order` on a uniform
/// grid of `len` nodes with spacing `h`. Interior nodes use centred stencils; near the
/// ends the same number of nodes is shifted inwards.
#[derive(Clone, Debug)]
pub struct FdOperator {
    pub len: usize,
    pub h: f64,
    pub width: usize,
    pub max_order: usize,
    /// `weights[offset][d][k]`, `offset` = position of the evaluation node within its stencil.
    weights: Vec<Vec<Vec<f64>>>,
}

impl FdOperator {
    pub fn new(len: usize, h: f64, max_order: usize, order: usize) -> Self {
        // odd width centred stencil reaching accuracy `order` for the top derivative
        let width = 2 * max_order.div_ceil(2) - 1 + order;
        let width = width.max(max_order + 1);
        let unit: Vec<f64> = (0..width).map(|k| k as f64).collect();
        let weights = (0..width)
            .map(|offset| {
                let mut w = fornberg_weights(offset as f64, &unit, max_order);
                for (d, row) in w.iter_mut().enumerate() {
                    let scale = h.powi(-(d as i32));
                    row.iter_mut().for_each(|x| *x *= scale);
                }
                w
            })
            .collect();
        FdOperator {
            len,
            h,
            width,
            max_order,
            weights,
        }
    }

    /// First stencil node and the evaluation offset inside the stencil for node `i`.
    pub fn placement(&self, i: usize) -> (usize, usize) {
        let half = self.width / 2;
        let lo = i.saturating_sub(half).min(self.len - self.width);
        (lo, i - lo)
    }

    pub fn weights(&self, i: usize) -> (usize, &[Vec<f64>]) {
        let (lo, off) = self.placement(i);
        (lo, &self.weights[off])
    }

    /// `[f, f', ..., f^(max_order)]` at node `i`.
    pub fn jet(&self, values: &[f64], i: usize) -> Vec<f64> {
        let (lo, w) = self.weights(i);
        w.iter()
            .map(|row| row.iter().zip(&values[lo..]).map(|(a, b)| a * b).sum())
            .collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn classic_second_derivative() {
        let w = fornberg_weights(0.0, &[-1.0, 0.0, 1.0], 2);
        assert_eq!(w[2], vec![1.0, -2.0, 1.0]);
        assert_eq!(w[1], vec![-0.5, 0.0, 0.5]);
        assert_eq!(w[0], vec![0.0, 1.0, 0.0]);
    }

    #[test]
    fn exact_on_polynomials() {
        let op = FdOperator::new(40, 0.1, 4, 4);
        let xs: Vec<f64> = (0..40).map(|i| i as f64 * 0.1).collect();
        // degree 6 polynomial: width 7 stencils differentiate it exactly
        let f: Vec<f64> = xs.iter().map(|x| x.powi(6) - 2.0 * x.powi(3) + x).collect();
        for i in [0, 3, 20, 39] {
            let x = xs[i];
            let jet = op.jet(&f, i);
            let exact = [
                x.powi(6) - 2.0 * x.powi(3) + x,
                6.0 * x.powi(5) - 6.0 * x * x + 1.0,
                30.0 * x.powi(4) - 12.0 * x,
                120.0 * x.powi(3) - 12.0,
                360.0 * x * x,
            ];
            for d in 0..=4 {
                assert!(
                    (jet[d] - exact[d]).abs() < 1e-6 * (1.0 + exact[d].abs()),
                    "d={d} i={i}"
                );
            }
        }
    }

    #[test]
    fn placement_near_edges() {
        let op = FdOperator::new(20, 1.0, 4, 4);
        assert_eq!(op.width, 7);
        assert_eq!(op.placement(0), (0, 0));
        assert_eq!(op.placement(10), (7, 3));
        assert_eq!(op.placement(19), (13, 6));
    }
}
