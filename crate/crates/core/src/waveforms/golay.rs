use num_complex::Complex;

use super::sequence::{cross_correlation, Gaussian, Phase, UnimodularSeq, MAX_SEQUENCE_LEN};
use crate::error::{invalid, Error, Result};

/// Largest `m` accepted by [`golay_matrix`]; the matrix holds `4^m` symbols.
pub const MAX_GOLAY_MATRIX_ORDER: u32 = 13;

/// Two equal-length sequences whose autocorrelations sum to `2L·δ[k]`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GolayPair {
    x: UnimodularSeq,
    y: UnimodularSeq,
}

impl GolayPair {
    /// Validates complementarity exactly. Cost is `O(L²)`.
    pub fn new(x: UnimodularSeq, y: UnimodularSeq) -> Result<Self> {
        let residual = check_complementary(&[x.clone(), y.clone()])?;
        if residual != 0.0 {
            return invalid(format!(
                "sequences are not complementary (max residual {residual})"
            ));
        }
        Ok(Self { x, y })
    }

    pub fn x(&self) -> &UnimodularSeq {
        &self.x
    }

    pub fn y(&self) -> &UnimodularSeq {
        &self.y
    }

    pub fn len(&self) -> usize {
        self.x.len()
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    /// Two CSV lines, `x` then `y`.
    pub fn to_csv(&self) -> String {
        format!("{}\n{}\n", self.x.to_csv_line(), self.y.to_csv_line())
    }

    pub fn parse_csv(text: &str) -> Result<Self> {
        let rows = parse_rows(text)?;
        if rows.len() != 2 {
            return Err(Error::Parse(format!(
                "a Golay pair file needs 2 sequence lines, found {}",
                rows.len()
            )));
        }
        let mut it = rows.into_iter();
        let (x, y) = (it.next().unwrap(), it.next().unwrap());
        if x.len() != y.len() {
            return invalid("pair members differ in length");
        }
        Self::new(x, y)
    }
}

/// `D` equal-length sequences whose autocorrelations sum to `D·L·δ[k]`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ComplementarySet {
    members: Vec<UnimodularSeq>,
}

impl ComplementarySet {
    pub fn new(members: Vec<UnimodularSeq>) -> Result<Self> {
        let residual = check_complementary(&members)?;
        if residual != 0.0 {
            return invalid(format!(
                "sequences are not complementary (max residual {residual})"
            ));
        }
        Ok(Self { members })
    }

    pub(crate) fn new_unchecked(members: Vec<UnimodularSeq>) -> Self {
        Self { members }
    }

    /// Members ordered `[y, x]`, so that binary symbol `p` selects member `p`
    /// (`p = 1` transmits `x`).
    pub fn from_pair(pair: &GolayPair) -> Self {
        Self {
            members: vec![pair.y.clone(), pair.x.clone()],
        }
    }

    pub fn members(&self) -> &[UnimodularSeq] {
        &self.members
    }

    pub fn member(&self, d: usize) -> &UnimodularSeq {
        &self.members[d]
    }

    pub fn size(&self) -> usize {
        self.members.len()
    }

    pub fn chip_len(&self) -> usize {
        self.members[0].len()
    }

    pub fn to_csv(&self) -> String {
        let mut out = String::new();
        for m in &self.members {
            out.push_str(&m.to_csv_line());
            out.push('\n');
        }
        out
    }

    pub fn parse_csv(text: &str) -> Result<Self> {
        Self::new(parse_rows(text)?)
    }
}

/// Non-empty, non-comment lines parsed as sequences.
pub(crate) fn parse_rows(text: &str) -> Result<Vec<UnimodularSeq>> {
    text.lines()
        .map(str::trim)
        .filter(|l| !l.is_empty() && !l.starts_with('#'))
        .map(UnimodularSeq::parse_csv_line)
        .collect()
}

/// Max over lags of `|Σ_d C_{x_d}[k] − D·L·δ[k]|`, computed exactly.
pub fn check_complementary(set: &[UnimodularSeq]) -> Result<f64> {
    let Some(first) = set.first() else {
        return invalid("complementary set must have at least one member");
    };
    let len = first.len();
    if set.iter().any(|s| s.len() != len) {
        return invalid("complementary set members differ in length");
    }
    let l = len as i64;
    let peak = Complex::new(set.len() as i64 * l, 0);
    let mut worst = 0i64;
    for k in -(l - 1)..l {
        let mut sum: Gaussian = set.iter().map(|s| cross_correlation(s, s, k)).sum();
        if k == 0 {
            sum -= peak;
        }
        worst = worst.max(sum.norm_sqr());
    }
    Ok((worst as f64).sqrt())
}

/// `2^m × 2^m` Golay matrix; rows `2i` and `2i+1` form a complementary pair.
///
/// Each pair `(a, b)` of order `m` spawns the rows `[a|b], [a|−b], [b|a], [b|−a]`
/// of order `m+1`, starting from `[[1, 1], [1, −1]]`.
pub fn golay_matrix(m: u32) -> Result<Vec<UnimodularSeq>> {
    if m > MAX_GOLAY_MATRIX_ORDER {
        return Err(Error::Capacity(format!(
            "golay_matrix order {m} exceeds {MAX_GOLAY_MATRIX_ORDER} (matrix would hold 4^{m} symbols)"
        )));
    }
    let mut rows: Vec<Vec<Phase>> = vec![vec![Phase::ONE]];
    if m >= 1 {
        rows = vec![
            vec![Phase::ONE, Phase::ONE],
            vec![Phase::ONE, Phase::NEG_ONE],
        ];
    }
    for _ in 1..m {
        let mut next = Vec::with_capacity(rows.len() * 2);
        for pair in rows.chunks(2) {
            let (a, b) = (&pair[0], &pair[1]);
            next.push(join(a, b, false));
            next.push(join(a, b, true));
            next.push(join(b, a, false));
            next.push(join(b, a, true));
        }
        rows = next;
    }
    rows.into_iter().map(UnimodularSeq::new).collect()
}

fn join(a: &[Phase], b: &[Phase], negate: bool) -> Vec<Phase> {
    let mut out = Vec::with_capacity(a.len() + b.len());
    out.extend_from_slice(a);
    out.extend(b.iter().map(|&p| if negate { -p } else { p }));
    out
}

/// Rows 0 and 1 of `golay_matrix(log2 L)`, built without materializing the matrix.
pub fn golay_pair(len: usize) -> Result<GolayPair> {
    if len == 0 || !len.is_power_of_two() {
        return invalid(format!("Golay pair length {len} is not a power of two"));
    }
    if len > MAX_SEQUENCE_LEN {
        return Err(Error::Capacity(format!(
            "Golay pair length {len} exceeds {MAX_SEQUENCE_LEN}"
        )));
    }
    let mut x = vec![Phase::ONE];
    let mut y = vec![Phase::ONE];
    while x.len() < len {
        let nx = join(&x, &y, false);
        let ny = join(&x, &y, true);
        x = nx;
        y = ny;
    }
    Ok(GolayPair {
        x: UnimodularSeq::new(x)?,
        y: UnimodularSeq::new(y)?,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn seq(tokens: &str) -> UnimodularSeq {
        UnimodularSeq::parse_csv_line(tokens).unwrap()
    }

    #[test]
    fn small_golay_matrices() {
        assert_eq!(golay_matrix(0).unwrap(), vec![seq("1")]);
        assert_eq!(golay_matrix(1).unwrap(), vec![seq("1,1"), seq("1,-1")]);
        let g4 = golay_matrix(2).unwrap();
        assert_eq!(
            g4,
            vec![
                seq("1,1,1,-1"),
                seq("1,1,-1,1"),
                seq("1,-1,1,1"),
                seq("1,-1,-1,-1"),
            ]
        );
    }

    #[test]
    fn golay_pair_examples() {
        let p = golay_pair(2).unwrap();
        assert_eq!((p.x(), p.y()), (&seq("1,1"), &seq("1,-1")));
        let p = golay_pair(4).unwrap();
        assert_eq!((p.x(), p.y()), (&seq("1,1,1,-1"), &seq("1,1,-1,1")));
        assert_eq!(
            check_complementary(&[p.x().clone(), p.y().clone()]).unwrap(),
            0.0
        );
        assert!(golay_pair(3).is_err());
        assert!(golay_pair(0).is_err());
    }

    #[test]
    fn golay_pair_matches_matrix_rows() {
        for m in 1..=8 {
            let g = golay_matrix(m).unwrap();
            let p = golay_pair(1 << m).unwrap();
            assert_eq!(p.x(), &g[0]);
            assert_eq!(p.y(), &g[1]);
        }
    }

    #[test]
    fn designated_row_pairs_are_complementary() {
        for m in 1..=6 {
            let g = golay_matrix(m).unwrap();
            for pair in g.chunks(2) {
                assert_eq!(check_complementary(pair).unwrap(), 0.0, "m={m}");
            }
        }
    }

    #[test]
    fn matrix_order_is_capped() {
        assert!(matches!(
            golay_matrix(MAX_GOLAY_MATRIX_ORDER + 1),
            Err(Error::Capacity(_))
        ));
    }

    #[test]
    fn residual_of_non_complementary_pair() {
        assert_eq!(check_complementary(&[seq("1,1"), seq("1,1")]).unwrap(), 2.0);
        assert!(check_complementary(&[seq("1,1"), seq("1")]).is_err());
        assert!(check_complementary(&[]).is_err());
    }

    #[test]
    fn pair_validation_rejects_non_complementary() {
        assert!(GolayPair::new(seq("1,1"), seq("1,1")).is_err());
        assert!(GolayPair::new(seq("1,1"), seq("1,-1")).is_ok());
    }

    #[test]
    fn from_pair_orders_y_first() {
        let p = golay_pair(8).unwrap();
        let set = ComplementarySet::from_pair(&p);
        assert_eq!(set.member(0), p.y());
        assert_eq!(set.member(1), p.x());
    }

    #[test]
    fn pair_csv_round_trip() {
        let p = golay_pair(16).unwrap();
        assert_eq!(GolayPair::parse_csv(&p.to_csv()).unwrap(), p);
        assert!(GolayPair::parse_csv("1,1\n1,1\n").is_err());
        assert!(GolayPair::parse_csv("1,1\n").is_err());
    }
}
