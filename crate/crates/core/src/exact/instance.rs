use std::fmt::Write as _;

use crate::error::{domain, Error, Result};
use crate::graph_model::{EdgeOracle, EdgeWeights};

/// Largest explicit instance the exhaustive tools accept.
pub const MAX_DENSE_N: usize = 14;

/// A small complete graph with explicit symmetric weights and a terminal set.
#[derive(Clone, Debug, PartialEq)]
pub struct DenseInstance {
    n: usize,
    weights: Vec<f64>,
    terminals: Vec<usize>,
}

impl DenseInstance {
    /// `upper` lists `w(0,1), w(0,2), .., w(0,n-1), w(1,2), ..` row by row.
    pub fn from_upper(n: usize, upper: &[f64], terminals: Vec<usize>) -> Result<Self> {
        if n == 0 || n > MAX_DENSE_N {
            return Err(Error::Capacity(format!(
                "dense instances hold 1..={MAX_DENSE_N} vertices, got {n}"
            )));
        }
        if upper.len() != n * (n - 1) / 2 {
            return domain(format!(
                "expected {} weights for n = {n}, got {}",
                n * (n - 1) / 2,
                upper.len()
            ));
        }
        let mut weights = vec![0.0; n * n];
        let mut it = upper.iter();
        for u in 0..n {
            for v in u + 1..n {
                let w = *it.next().expect("length checked");
                if !w.is_finite() || w < 0.0 {
                    return domain(format!("weight {w} on {u}-{v} is not a finite nonnegative number"));
                }
                weights[u * n + v] = w;
                weights[v * n + u] = w;
            }
        }
        Self::with_terminals(n, weights, terminals)
    }

    fn with_terminals(n: usize, weights: Vec<f64>, mut terminals: Vec<usize>) -> Result<Self> {
        terminals.sort_unstable();
        terminals.dedup();
        if let Some(&t) = terminals.iter().find(|&&t| t >= n) {
            return domain(format!("terminal {t} is outside [0, {n})"));
        }
        Ok(DenseInstance { n, weights, terminals })
    }

    /// Copies the weights of an implicit oracle restricted to `0..n`.
    pub fn from_oracle<W: EdgeWeights>(w: &W, n: usize, terminals: Vec<usize>) -> Result<Self> {
        if n > w.vertex_count() {
            return domain(format!("oracle has only {} vertices", w.vertex_count()));
        }
        let upper: Vec<f64> = (0..n)
            .flat_map(|u| (u + 1..n).map(move |v| (u, v)))
            .map(|(u, v)| w.weight(u, v))
            .collect();
        Self::from_upper(n, &upper, terminals)
    }

    /// An instance with i.i.d. `Exp(1)` weights drawn from the base stream.
    pub fn random_exp1(n: usize, seed: u64, terminals: Vec<usize>) -> Result<Self> {
        let o = EdgeOracle::exp1(n.max(2), seed)?;
        Self::from_oracle(&o, n, terminals)
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn terminals(&self) -> &[usize] {
        &self.terminals
    }

    pub fn is_spanning(&self) -> bool {
        self.terminals.len() == self.n
    }

    pub fn w(&self, u: usize, v: usize) -> f64 {
        self.weights[u * self.n + v]
    }

    /// Text form: `n m`, the `m` terminals, then the upper triangle.
    pub fn to_text(&self) -> String {
        let mut s = format!("{} {}\n", self.n, self.terminals.len());
        let ts: Vec<String> = self.terminals.iter().map(|t| t.to_string()).collect();
        writeln!(s, "{}", ts.join(" ")).unwrap();
        for u in 0..self.n {
            let row: Vec<String> = (u + 1..self.n).map(|v| format!("{:?}", self.w(u, v))).collect();
            if !row.is_empty() {
                writeln!(s, "{}", row.join(" ")).unwrap();
            }
        }
        s
    }

    pub fn from_text(text: &str) -> Result<Self> {
        let mut tok = text.split_whitespace();
        let mut next = |what: &str| {
            tok.next()
                .ok_or_else(|| Error::Parse(format!("instance ends before {what}")))
        };
        let n: usize = parse(next("n")?)?;
        let m: usize = parse(next("m")?)?;
        if n == 0 || n > MAX_DENSE_N {
            return Err(Error::Capacity(format!("instance size {n} is outside 1..={MAX_DENSE_N}")));
        }
        if m > n {
            return Err(Error::Parse(format!("m = {m} exceeds n = {n}")));
        }
        let terminals = (0..m).map(|_| parse(next("terminal ids")?)).collect::<Result<Vec<usize>>>()?;
        let upper = (0..n * (n - 1) / 2)
            .map(|_| parse(next("weights")?))
            .collect::<Result<Vec<f64>>>()?;
        if tok.next().is_some() {
            return Err(Error::Parse("trailing tokens after the weights".into()));
        }
        Self::from_upper(n, &upper, terminals)
    }
}

fn parse<T: std::str::FromStr>(s: &str) -> Result<T> {
    s.parse().map_err(|_| Error::Parse(format!("cannot parse `{s}`")))
}

impl EdgeWeights for DenseInstance {
    type Key = f64;

    fn vertex_count(&self) -> usize {
        self.n
    }
    #[inline]
    fn key(&self, u: usize, v: usize) -> f64 {
        self.w(u, v)
    }
    fn key_weight(&self, key: f64) -> f64 {
        key
    }
    fn unbounded(&self) -> f64 {
        f64::INFINITY
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn text_round_trip() {
        let inst = DenseInstance::random_exp1(6, 11, vec![0, 2, 5]).unwrap();
        let back = DenseInstance::from_text(&inst.to_text()).unwrap();
        assert_eq!(inst, back);
    }

    #[test]
    fn validation() {
        assert!(DenseInstance::from_upper(3, &[1.0, 2.0], vec![0]).is_err());
        assert!(DenseInstance::from_upper(3, &[1.0, -2.0, 1.0], vec![0]).is_err());
        assert!(DenseInstance::from_upper(3, &[1.0, 2.0, 1.0], vec![3]).is_err());
        assert!(matches!(
            DenseInstance::from_upper(15, &vec![1.0; 105], vec![0]),
            Err(Error::Capacity(_))
        ));
        assert!(DenseInstance::from_text("3 1\n0\n1 2").is_err());
        assert!(DenseInstance::from_text("2 1\n0\n1 2").is_err());
    }

    #[test]
    fn symmetric_lookup() {
        let inst = DenseInstance::from_upper(3, &[0.1, 0.9, 0.5], vec![0, 1, 2]).unwrap();
        assert_eq!(inst.w(2, 0), 0.9);
        assert_eq!(inst.w(1, 2), 0.5);
        assert!(inst.is_spanning());
    }
}
