//! Banded matrices and Gaussian elimination with partial pivoting.

/// Square matrix with `kl` sub- and `ku` super-diagonals. Each row keeps its own column
/// window so that pivoting fill-in can extend it to the right.
#[derive(Clone, Debug)]
pub struct BandMatrix {
    n: usize,
    kl: usize,
    ku: usize,
    rows: Vec<Row>,
}

#[derive(Clone, Debug)]
struct Row {
    start: usize,
    vals: Vec<f64>,
}

impl Row {
    fn get(&self, j: usize) -> f64 {
        if j < self.start {
            return 0.0;
        }
        self.vals.get(j - self.start).copied().unwrap_or(0.0)
    }

    fn end(&self) -> usize {
        self.start + self.vals.len()
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct SingularPivot {
    pub column: usize,
    pub magnitude: f64,
}

impl BandMatrix {
    pub fn zeros(n: usize, kl: usize, ku: usize) -> Self {
        let rows = (0..n)
            .map(|i| {
                let start = i.saturating_sub(kl);
                let end = (i + ku + 1).min(n);
                Row {
                    start,
                    vals: vec![0.0; end - start],
                }
            })
            .collect();
        BandMatrix { n, kl, ku, rows }
    }

    pub fn dim(&self) -> usize {
        self.n
    }

    pub fn bandwidths(&self) -> (usize, usize) {
        (self.kl, self.ku)
    }

    pub fn get(&self, i: usize, j: usize) -> f64 {
        self.rows[i].get(j)
    }

    /// Adds `v` at `(i, j)`; panics outside the declared band.
    pub fn add(&mut self, i: usize, j: usize, v: f64) {
        let row = &mut self.rows[i];
        assert!(
            j >= row.start && j < row.end(),
            "entry ({i}, {j}) outside band kl={} ku={}",
            self.kl,
            self.ku
        );
        row.vals[j - row.start] += v;
    }

    pub fn mul_vec(&self, x: &[f64]) -> Vec<f64> {
        self.rows
            .iter()
            .map(|r| r.vals.iter().zip(&x[r.start..]).map(|(a, b)| a * b).sum())
            .collect()
    }

    /// In-place LU factorisation with row pivoting.
    pub fn factor(mut self) -> Result<BandLu, SingularPivot> {
        let n = self.n;
        let scale = self
            .rows
            .iter()
            .flat_map(|r| r.vals.iter())
            .fold(0.0f64, |a, v| a.max(v.abs()));
        let tiny = scale * f64::EPSILON * 1e-3;
        let mut perm: Vec<usize> = Vec::with_capacity(n);
        let mut lower: Vec<Vec<f64>> = Vec::with_capacity(n);
        for k in 0..n {
            let last = (k + self.kl).min(n - 1);
            let (p, mag) =
                (k..=last)
                    .map(|i| (i, self.rows[i].get(k).abs()))
                    .fold(
                        (k, -1.0),
                        |best, cur| if cur.1 > best.1 { cur } else { best },
                    );
            if !(mag > tiny) {
                return Err(SingularPivot {
                    column: k,
                    magnitude: mag,
                });
            }
            self.rows.swap(k, p);
            perm.push(p);
            let pivot_row = self.rows[k].clone();
            let pivot = pivot_row.get(k);
            let mut mults = Vec::with_capacity(last - k);
            for i in k + 1..=last {
                let row = &mut self.rows[i];
                let a = row.get(k);
                if a == 0.0 {
                    mults.push(0.0);
                    continue;
                }
                let l = a / pivot;
                mults.push(l);
                if row.end() < pivot_row.end() {
                    row.vals.resize(pivot_row.end() - row.start, 0.0);
                }
                for j in k..pivot_row.end() {
                    let v = pivot_row.get(j);
                    if v != 0.0 {
                        row.vals[j - row.start] -= l * v;
                    }
                }
            }
            lower.push(mults);
        }
        Ok(BandLu {
            upper: self.rows,
            perm,
            lower,
        })
    }
}

#[derive(Clone, Debug)]
pub struct BandLu {
    upper: Vec<Row>,
    perm: Vec<usize>,
    lower: Vec<Vec<f64>>,
}

impl BandLu {
    pub fn solve(&self, b: &[f64]) -> Vec<f64> {
        let n = self.upper.len();
        let mut x = b.to_vec();
        for k in 0..n {
            x.swap(k, self.perm[k]);
            let xk = x[k];
            for (off, l) in self.lower[k].iter().enumerate() {
                x[k + 1 + off] -= l * xk;
            }
        }
        for k in (0..n).rev() {
            let row = &self.upper[k];
            let mut acc = x[k];
            for j in k + 1..row.end() {
                acc -= row.get(j) * x[j];
            }
            x[k] = acc / row.get(k);
        }
        x
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn dense_solve(a: &[Vec<f64>], b: &[f64]) -> Vec<f64> {
        let n = b.len();
        let mut m: Vec<Vec<f64>> = a.to_vec();
        let mut x = b.to_vec();
        for k in 0..n {
            let p = (k..n)
                .max_by(|&i, &j| m[i][k].abs().partial_cmp(&m[j][k].abs()).unwrap())
                .unwrap();
            m.swap(k, p);
            x.swap(k, p);
            for i in k + 1..n {
                let l = m[i][k] / m[k][k];
                for j in k..n {
                    m[i][j] -= l * m[k][j];
                }
                x[i] -= l * x[k];
            }
        }
        for k in (0..n).rev() {
            let s: f64 = (k + 1..n).map(|j| m[k][j] * x[j]).sum();
            x[k] = (x[k] - s) / m[k][k];
        }
        x
    }

    #[test]
    fn matches_dense_with_pivoting() {
        let (n, kl, ku) = (30, 3, 2);
        let mut band = BandMatrix::zeros(n, kl, ku);
        let mut dense = vec![vec![0.0; n]; n];
        let mut seed = 7u64;
        let mut rnd = || {
            seed = seed
                .wrapping_mul(6364136223846793005)
                .wrapping_add(1442695040888963407);
            ((seed >> 33) as f64 / (1u64 << 31) as f64) - 0.5
        };
        for i in 0..n {
            for j in i.saturating_sub(kl)..(i + ku + 1).min(n) {
                // weak diagonal forces row exchanges
                let v = if i == j { 1e-3 * rnd() } else { rnd() };
                band.add(i, j, v);
                dense[i][j] = v;
            }
        }
        let b: Vec<f64> = (0..n).map(|i| (i as f64).sin()).collect();
        let x = band.clone().factor().unwrap().solve(&b);
        let xd = dense_solve(&dense, &b);
        for (a, c) in x.iter().zip(&xd) {
            assert!((a - c).abs() < 1e-9 * (1.0 + c.abs()));
        }
        let r = band.mul_vec(&x);
        for (ri, bi) in r.iter().zip(&b) {
            assert!((ri - bi).abs() < 1e-10);
        }
    }

    #[test]
    fn detects_singular() {
        let mut band = BandMatrix::zeros(3, 1, 1);
        band.add(0, 0, 1.0);
        band.add(1, 1, 0.0);
        band.add(2, 2, 1.0);
        assert!(band.factor().is_err());
    }
}
