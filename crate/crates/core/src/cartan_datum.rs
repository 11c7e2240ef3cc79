//! Borcherds–Cartan data: validation, index classification, symmetrizers and
//! the entries of the lifted Cartan matrix.

use std::fmt;

use num_integer::Integer;
use num_rational::Ratio;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Default cap on symmetrizer entries.
pub const DEFAULT_SYMMETRIZER_BOUND: i64 = 64;

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct BorcherdsCartanDatum {
    labels: Vec<String>,
    matrix: Vec<Vec<i64>>,
    symmetrizer: Option<Vec<i64>>,
}

/// Index of the lifted Kac–Moody datum: a base index together with a level.
/// Real indices only exist at level 1.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct LiftedIndex {
    pub base: usize,
    pub level: u32,
}

impl LiftedIndex {
    pub fn new(base: usize, level: u32) -> LiftedIndex {
        LiftedIndex { base, level }
    }
}

impl BorcherdsCartanDatum {
    pub fn new(labels: Vec<String>, matrix: Vec<Vec<i64>>) -> Result<Self> {
        let n = labels.len();
        if matrix.len() != n || matrix.iter().any(|row| row.len() != n) {
            return Err(Error::Malformed(format!(
                "matrix must be {n}x{n} to match {n} labels"
            )));
        }
        for (i, l) in labels.iter().enumerate() {
            if labels[..i].contains(l) {
                return Err(Error::Malformed(format!("duplicate label {l:?}")));
            }
        }
        for i in 0..n {
            let d = matrix[i][i];
            if d != 2 && d > 0 {
                return Err(Error::DiagonalViolation { index: i, value: d });
            }
            for j in 0..n {
                if i == j {
                    continue;
                }
                if matrix[i][j] > 0 {
                    return Err(Error::SignViolation { i, j, value: matrix[i][j] });
                }
                if (matrix[i][j] == 0) != (matrix[j][i] == 0) {
                    return Err(Error::ZeroAsymmetry { i: i.min(j), j: i.max(j) });
                }
            }
        }
        Ok(BorcherdsCartanDatum { labels, matrix, symmetrizer: None })
    }

    /// Datum with labels "1", "2", ... in matrix order.
    pub fn from_matrix(matrix: Vec<Vec<i64>>) -> Result<Self> {
        let labels = (1..=matrix.len()).map(|i| i.to_string()).collect();
        Self::new(labels, matrix)
    }

    /// Attach a symmetrizer after checking `d_i a_ij = d_j a_ji`.
    pub fn with_symmetrizer(mut self, d: Vec<i64>) -> Result<Self> {
        check_symmetrizer(&self.matrix, &d)?;
        self.symmetrizer = Some(d);
        Ok(self)
    }

    pub fn rank(&self) -> usize {
        self.labels.len()
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    pub fn label(&self, i: usize) -> &str {
        &self.labels[i]
    }

    pub fn index_of(&self, label: &str) -> Result<usize> {
        self.labels
            .iter()
            .position(|l| l == label)
            .ok_or_else(|| Error::UnknownLabel(label.to_string()))
    }

    pub fn matrix(&self) -> &[Vec<i64>] {
        &self.matrix
    }

    pub fn entry(&self, i: usize, j: usize) -> i64 {
        self.matrix[i][j]
    }

    pub fn symmetrizer(&self) -> Option<&[i64]> {
        self.symmetrizer.as_deref()
    }

    pub fn is_real(&self, i: usize) -> bool {
        self.matrix[i][i] == 2
    }

    pub fn real_indices(&self) -> Vec<usize> {
        (0..self.rank()).filter(|&i| self.is_real(i)).collect()
    }

    pub fn imag_indices(&self) -> Vec<usize> {
        (0..self.rank()).filter(|&i| !self.is_real(i)).collect()
    }

    pub fn is_ordinary(&self) -> bool {
        (0..self.rank()).all(|i| self.is_real(i))
    }

    pub fn is_even(&self) -> bool {
        (0..self.rank()).all(|i| self.matrix[i][i] % 2 == 0)
    }

    /// Minimal positive integer symmetrizer, one coprime block per connected
    /// component of the Dynkin graph. `Ok(None)` when the matrix is not
    /// symmetrizable.
    pub fn find_symmetrizer(&self, bound: i64) -> Result<Option<Vec<i64>>> {
        let n = self.rank();
        let mut ratio: Vec<Option<Ratio<i64>>> = vec![None; n];
        let mut component = vec![usize::MAX; n];
        let mut ncomp = 0;
        for start in 0..n {
            if ratio[start].is_some() {
                continue;
            }
            ratio[start] = Some(Ratio::from_integer(1));
            component[start] = ncomp;
            let mut stack = vec![start];
            while let Some(i) = stack.pop() {
                let di = ratio[i].unwrap();
                for j in 0..n {
                    if i == j || self.matrix[i][j] == 0 {
                        continue;
                    }
                    // d_i a_ij = d_j a_ji
                    let dj = di * Ratio::new(self.matrix[i][j], self.matrix[j][i]);
                    match ratio[j] {
                        None => {
                            ratio[j] = Some(dj);
                            component[j] = ncomp;
                            stack.push(j);
                        }
                        Some(existing) if existing != dj => return Ok(None),
                        Some(_) => {}
                    }
                }
            }
            ncomp += 1;
        }
        let mut d = vec![0i64; n];
        for c in 0..ncomp {
            let members: Vec<usize> = (0..n).filter(|&i| component[i] == c).collect();
            let lcm = members
                .iter()
                .fold(1i64, |acc, &i| acc.lcm(ratio[i].unwrap().denom()));
            let scaled: Vec<i64> = members
                .iter()
                .map(|&i| (ratio[i].unwrap() * lcm).to_integer())
                .collect();
            let g = scaled.iter().fold(0i64, |acc, &v| acc.gcd(&v));
            for (k, &i) in members.iter().enumerate() {
                d[i] = scaled[k] / g;
            }
        }
        if let Some(&big) = d.iter().max() {
            if big > bound {
                return Err(Error::BoundExceeded {
                    what: "symmetrizer entry".into(),
                    bound: bound as usize,
                });
            }
        }
        check_symmetrizer(&self.matrix, &d)?;
        Ok(Some(d))
    }

    pub fn check_lifted(&self, p: LiftedIndex) -> Result<()> {
        if p.level == 0 || (self.is_real(p.base) && p.level != 1) {
            return Err(Error::LevelViolation {
                label: self.labels[p.base].clone(),
                level: p.level,
            });
        }
        Ok(())
    }

    /// Entry of the lifted Cartan matrix: 2 on the diagonal, `a_ij` elsewhere.
    pub fn lifted_entry(&self, p: LiftedIndex, q: LiftedIndex) -> Result<i64> {
        self.check_lifted(p)?;
        self.check_lifted(q)?;
        Ok(self.lifted_entry_unchecked(p, q))
    }

    pub(crate) fn lifted_entry_unchecked(&self, p: LiftedIndex, q: LiftedIndex) -> i64 {
        if p == q {
            2
        } else {
            self.matrix[p.base][q.base]
        }
    }

    /// Sub-datum on the given indices (in the given order).
    pub fn restrict(&self, subset: &[usize]) -> BorcherdsCartanDatum {
        let labels = subset.iter().map(|&i| self.labels[i].clone()).collect();
        let matrix = subset
            .iter()
            .map(|&i| subset.iter().map(|&j| self.matrix[i][j]).collect())
            .collect();
        let symmetrizer = self
            .symmetrizer
            .as_ref()
            .map(|d| subset.iter().map(|&i| d[i]).collect());
        BorcherdsCartanDatum { labels, matrix, symmetrizer }
    }

    pub fn to_file(&self) -> DatumFile {
        DatumFile {
            labels: self.labels.iter().cloned().map(Label).collect(),
            matrix: self.matrix.clone(),
            symmetrizer: self.symmetrizer.clone(),
        }
    }

    pub fn from_file(file: DatumFile) -> Result<Self> {
        let datum = Self::new(file.labels.into_iter().map(|l| l.0).collect(), file.matrix)?;
        match file.symmetrizer {
            Some(d) => datum.with_symmetrizer(d),
            None => Ok(datum),
        }
    }

    pub fn from_json(text: &str) -> Result<Self> {
        let file: DatumFile =
            serde_json::from_str(text).map_err(|e| Error::Parse(e.to_string()))?;
        Self::from_file(file)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(&self.to_file()).expect("datum serializes")
    }

    /// Parse a label list such as `"1 2,3"` into indices.
    pub fn parse_word(&self, text: &str) -> Result<Vec<usize>> {
        text.split(|c: char| c == ',' || c.is_whitespace())
            .filter(|s| !s.is_empty())
            .map(|s| self.index_of(s))
            .collect()
    }
}

fn check_symmetrizer(matrix: &[Vec<i64>], d: &[i64]) -> Result<()> {
    let n = matrix.len();
    if d.len() != n {
        return Err(Error::BadSymmetrizer(format!("expected {n} entries, got {}", d.len())));
    }
    if let Some(bad) = d.iter().find(|&&x| x < 1) {
        return Err(Error::BadSymmetrizer(format!("entry {bad} is not positive")));
    }
    for i in 0..n {
        for j in 0..n {
            if d[i] * matrix[i][j] != d[j] * matrix[j][i] {
                return Err(Error::BadSymmetrizer(format!(
                    "d[{i}]*a[{i}][{j}] != d[{j}]*a[{j}][{i}]"
                )));
            }
        }
    }
    Ok(())
}

/// Label as it appears in JSON; numbers and strings are both accepted.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Label(pub String);

impl Serialize for Label {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        match self.0.parse::<i64>() {
            Ok(n) if n.to_string() == self.0 => s.serialize_i64(n),
            _ => s.serialize_str(&self.0),
        }
    }
}

impl<'de> Deserialize<'de> for Label {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Label, D::Error> {
        match serde_json::Value::deserialize(d)? {
            serde_json::Value::String(s) => Ok(Label(s)),
            serde_json::Value::Number(n) => Ok(Label(n.to_string())),
            other => Err(serde::de::Error::custom(format!("bad label {other}"))),
        }
    }
}

/// On-disk form of a datum.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct DatumFile {
    pub labels: Vec<Label>,
    pub matrix: Vec<Vec<i64>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub symmetrizer: Option<Vec<i64>>,
}

impl fmt::Display for BorcherdsCartanDatum {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let real: Vec<&str> = self.real_indices().iter().map(|&i| self.label(i)).collect();
        let imag: Vec<&str> = self.imag_indices().iter().map(|&i| self.label(i)).collect();
        write!(f, "rank {} (real {{{}}}, imaginary {{{}}})", self.rank(), real.join(","), imag.join(","))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn gkm2() -> BorcherdsCartanDatum {
        BorcherdsCartanDatum::from_matrix(vec![vec![2, -1], vec![-2, -4]]).unwrap()
    }

    #[test]
    fn classification() {
        let d = gkm2();
        assert_eq!(d.real_indices(), vec![0]);
        assert_eq!(d.imag_indices(), vec![1]);
        let one = BorcherdsCartanDatum::from_matrix(vec![vec![2]]).unwrap();
        assert_eq!(one.real_indices(), vec![0]);
        assert!(one.imag_indices().is_empty());
    }

    #[test]
    fn validation_errors() {
        assert_eq!(
            BorcherdsCartanDatum::from_matrix(vec![vec![2, -1], vec![0, -4]]).unwrap_err(),
            Error::ZeroAsymmetry { i: 0, j: 1 }
        );
        assert!(matches!(
            BorcherdsCartanDatum::from_matrix(vec![vec![3]]),
            Err(Error::DiagonalViolation { .. })
        ));
        assert!(matches!(
            BorcherdsCartanDatum::from_matrix(vec![vec![2, 1], vec![1, 2]]),
            Err(Error::SignViolation { .. })
        ));
    }

    #[test]
    fn symmetrizers() {
        assert_eq!(gkm2().find_symmetrizer(64).unwrap(), Some(vec![2, 1]));
        let one = BorcherdsCartanDatum::from_matrix(vec![vec![2]]).unwrap();
        assert_eq!(one.find_symmetrizer(64).unwrap(), Some(vec![1]));
        let three =
            BorcherdsCartanDatum::from_matrix(vec![vec![2, -1, 0], vec![-2, 2, -1], vec![0, -3, 2]])
                .unwrap();
        assert_eq!(three.find_symmetrizer(64).unwrap(), Some(vec![6, 3, 1]));
        assert!(matches!(three.find_symmetrizer(4), Err(Error::BoundExceeded { .. })));
        // a 3-cycle whose ratios do not close up
        let cyc = BorcherdsCartanDatum::from_matrix(vec![
            vec![2, -1, -1],
            vec![-2, 2, -1],
            vec![-1, -1, 2],
        ])
        .unwrap();
        assert_eq!(cyc.find_symmetrizer(64).unwrap(), None);
    }

    #[test]
    fn parity() {
        assert!(gkm2().is_even());
        assert!(!BorcherdsCartanDatum::from_matrix(vec![vec![-3]]).unwrap().is_even());
        assert!(BorcherdsCartanDatum::from_matrix(vec![vec![2]]).unwrap().is_even());
    }

    #[test]
    fn lifted_entries() {
        let d = gkm2();
        let l = LiftedIndex::new;
        assert_eq!(d.lifted_entry(l(1, 1), l(1, 2)).unwrap(), -4);
        assert_eq!(d.lifted_entry(l(0, 1), l(1, 3)).unwrap(), -1);
        assert_eq!(d.lifted_entry(l(1, 5), l(1, 5)).unwrap(), 2);
        assert_eq!(d.lifted_entry(l(1, 3), l(0, 1)).unwrap(), -2);
        assert!(matches!(d.lifted_entry(l(0, 2), l(1, 1)), Err(Error::LevelViolation { .. })));
    }

    #[test]
    fn json_roundtrip() {
        let d = gkm2().with_symmetrizer(vec![2, 1]).unwrap();
        let back = BorcherdsCartanDatum::from_json(&d.to_json()).unwrap();
        assert_eq!(back, d);
        let named = BorcherdsCartanDatum::from_json(r#"{"labels":["a","b"],"matrix":[[2,-1],[-1,2]]}"#)
            .unwrap();
        assert_eq!(named.index_of("b").unwrap(), 1);
        assert_eq!(named.parse_word("a b,a").unwrap(), vec![0, 1, 0]);
    }
}
