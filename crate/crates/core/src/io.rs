//! JSON wire formats: scalars as term lists, numeric complex values as
//! decimal strings with an explicit precision field, matrices, cohomology
//! and K-theory classes, exceptional-basis states, monodromy data with a
//! backend tag, and validation reports.

use num_bigint::BigInt;
use num_rational::BigRational;
use serde::{Deserialize, Serialize};

use crate::bigfloat::{ApproxComplex, BigFloat};
use crate::braid::{BraidLetter, BraidWord};
use crate::cohomology::{CohClass, KClass};
use crate::matrix::{CxMatrix, IntMatrix, RatMatrix, ScalarMatrix};
use crate::monodromy::{
    CMatrix, ConstraintResult, DataMeta, MonodromyData, ValidationReport,
};
use crate::mukai::ExceptionalBasisState;
use crate::scalar::{SymScalar, TermJson};
use crate::{Error, Result};

/// Decimal-string encoding of one arbitrary-precision complex number.
#[derive(Serialize, Deserialize, Clone)]
pub struct ComplexJson {
    pub re: String,
    pub im: String,
    pub precision: u32,
}

impl ComplexJson {
    pub fn from_value(z: &ApproxComplex, digits: u32) -> Self {
        ComplexJson {
            re: z.re.to_decimal_string(digits),
            im: z.im.to_decimal_string(digits),
            precision: z.precision(),
        }
    }

    pub fn to_value(&self) -> Result<ApproxComplex> {
        let re = BigFloat::parse_decimal(&self.re, self.precision)
            .ok_or_else(|| Error::Parse(self.re.clone()))?;
        let im = BigFloat::parse_decimal(&self.im, self.precision)
            .ok_or_else(|| Error::Parse(self.im.clone()))?;
        Ok(ApproxComplex::new(re, im))
    }
}

/// A symbolic scalar as its list of terms.
pub type ScalarJson = Vec<TermJson>;

pub fn scalar_to_json(x: &SymScalar) -> ScalarJson {
    x.to_json_terms()
}

pub fn scalar_from_json(t: &[TermJson]) -> Result<SymScalar> {
    SymScalar::from_json_terms(t)
}

/// Integer matrix as rows of decimal strings (exact, arbitrary size).
pub fn int_matrix_to_json(m: &IntMatrix) -> Vec<Vec<String>> {
    (0..m.rows())
        .map(|i| (0..m.cols()).map(|j| m.at(i, j).to_string()).collect())
        .collect()
}

pub fn int_matrix_from_json(rows: &[Vec<String>]) -> Result<IntMatrix> {
    let r = rows.len();
    let c = rows.first().map(|x| x.len()).unwrap_or(0);
    let mut m = IntMatrix::zero(r, c);
    for (i, row) in rows.iter().enumerate() {
        if row.len() != c {
            return Err(Error::Parse("ragged matrix".into()));
        }
        for (j, v) in row.iter().enumerate() {
            let x: BigInt = v.parse().map_err(|_| Error::Parse(v.clone()))?;
            m.set(i, j, x);
        }
    }
    Ok(m)
}

/// `CohClass`/`KClass` serialization: coefficients over a tagged basis.
#[derive(Serialize, Deserialize)]
pub struct ClassJson {
    pub k: usize,
    pub basis: String,
    pub coeffs: Vec<ScalarJson>,
}

pub fn coh_class_to_json(c: &CohClass) -> ClassJson {
    ClassJson {
        k: c.k,
        basis: "sigma-powers".into(),
        coeffs: c.coeffs.iter().map(scalar_to_json).collect(),
    }
}

pub fn coh_class_from_json(j: &ClassJson) -> Result<CohClass> {
    if j.basis != "sigma-powers" {
        return Err(Error::invalid("expected sigma-powers basis"));
    }
    let coeffs: Result<Vec<SymScalar>> =
        j.coeffs.iter().map(|t| scalar_from_json(t)).collect();
    Ok(CohClass::from_coeffs(j.k, coeffs?))
}

pub fn k_class_to_json(c: &KClass) -> ClassJson {
    ClassJson {
        k: c.k,
        basis: "beilinson".into(),
        coeffs: c
            .coords
            .iter()
            .map(|q| scalar_to_json(&SymScalar::from_rational(q.clone())))
            .collect(),
    }
}

pub fn k_class_from_json(j: &ClassJson) -> Result<KClass> {
    if j.basis != "beilinson" {
        return Err(Error::invalid("expected beilinson basis"));
    }
    let mut coords = Vec::with_capacity(j.coeffs.len());
    for t in &j.coeffs {
        let s = scalar_from_json(t)?;
        let g = s
            .as_gauss()
            .ok_or_else(|| Error::invalid("K-class coordinate is not rational"))?;
        if !num_traits::Zero::is_zero(&g.im) {
            return Err(Error::invalid("K-class coordinate is not real"));
        }
        coords.push(g.re);
    }
    Ok(KClass { k: j.k, coords })
}

/// Exceptional-basis state (history letters as `b+i` / `b-i`).
#[derive(Serialize, Deserialize)]
pub struct BasisStateJson {
    pub n: usize,
    pub gram: Vec<Vec<String>>,
    pub labels: Vec<String>,
    pub signs: Vec<i8>,
    pub history: Vec<String>,
}

pub fn basis_state_to_json(s: &ExceptionalBasisState) -> BasisStateJson {
    BasisStateJson {
        n: s.rank(),
        gram: int_matrix_to_json(&s.gram),
        labels: s.labels.clone(),
        signs: s.signs.clone(),
        history: s
            .history
            .letters
            .iter()
            .map(|l| format!("b{}{}", if l.inverse { '-' } else { '+' }, l.index))
            .collect(),
    }
}

pub fn basis_state_from_json(j: &BasisStateJson) -> Result<ExceptionalBasisState> {
    let gram = int_matrix_from_json(&j.gram)?;
    let mut letters = Vec::with_capacity(j.history.len());
    for h in &j.history {
        let rest = h
            .strip_prefix("b")
            .ok_or_else(|| Error::Parse(h.clone()))?;
        let (inverse, idx) = match rest.as_bytes().first() {
            Some(b'+') => (false, &rest[1..]),
            Some(b'-') => (true, &rest[1..]),
            _ => (false, rest),
        };
        let index: usize = idx.parse().map_err(|_| Error::Parse(h.clone()))?;
        letters.push(BraidLetter { index, inverse });
    }
    let mut state = ExceptionalBasisState::new(gram, j.labels.clone())?;
    state.signs = j.signs.clone();
    state.history = BraidWord::from_letters(j.n, letters)?;
    Ok(state)
}

/// Monodromy data with explicit backend tag.
#[derive(Serialize, Deserialize)]
pub struct MonodromyJson {
    pub n: usize,
    pub space: String,
    pub dim: usize,
    pub chamber: Option<i64>,
    pub backend: String,
    /// twice the (half-integer) grading eigenvalues
    pub mu_twice: Vec<String>,
    pub r: Vec<Vec<String>>,
    pub eta: Vec<Vec<String>>,
    pub stokes: Vec<Vec<String>>,
    pub c_symbolic: Option<Vec<Vec<ScalarJson>>>,
    pub c_numeric: Option<Vec<Vec<ComplexJson>>>,
}

pub fn monodromy_to_json(d: &MonodromyData) -> MonodromyJson {
    let n = d.size();
    let mu_twice = (0..n)
        .map(|i| {
            let twice = d.mu.at(i, i) * BigRational::from_integer(2.into());
            twice.numer().to_string()
        })
        .collect();
    let (c_symbolic, c_numeric) = match &d.c_mat {
        CMatrix::Symbolic(m) => (
            Some(
                (0..n)
                    .map(|i| (0..n).map(|j| scalar_to_json(m.at(i, j))).collect())
                    .collect(),
            ),
            None,
        ),
        CMatrix::Numeric(m) => (
            None,
            Some(
                (0..n)
                    .map(|i| {
                        (0..n)
                            .map(|j| ComplexJson::from_value(m.at(i, j), 100))
                            .collect()
                    })
                    .collect(),
            ),
        ),
    };
    MonodromyJson {
        n,
        space: d.meta.space.clone(),
        dim: d.meta.dim,
        chamber: d.meta.chamber,
        backend: d.c_mat.backend_name().into(),
        mu_twice,
        r: int_matrix_to_json(&d.r_mat),
        eta: int_matrix_to_json(&d.eta),
        stokes: int_matrix_to_json(&d.stokes),
        c_symbolic,
        c_numeric,
    }
}

pub fn monodromy_from_json(j: &MonodromyJson) -> Result<MonodromyData> {
    let n = j.n;
    let mut mu = RatMatrix::zero(n, n);
    for (i, t) in j.mu_twice.iter().enumerate() {
        let twice: BigInt = t.parse().map_err(|_| Error::Parse(t.clone()))?;
        mu.set(i, i, BigRational::new(twice, 2.into()));
    }
    let c_mat = match j.backend.as_str() {
        "symbolic" => {
            let rows = j
                .c_symbolic
                .as_ref()
                .ok_or_else(|| Error::invalid("missing symbolic C payload"))?;
            let mut m = ScalarMatrix::zero(n, n);
            for (i, row) in rows.iter().enumerate() {
                for (jj, cell) in row.iter().enumerate() {
                    m.set(i, jj, scalar_from_json(cell)?);
                }
            }
            CMatrix::Symbolic(m)
        }
        "numeric" => {
            let rows = j
                .c_numeric
                .as_ref()
                .ok_or_else(|| Error::invalid("missing numeric C payload"))?;
            let mut m = CxMatrix::zero(n, n);
            for (i, row) in rows.iter().enumerate() {
                for (jj, cell) in row.iter().enumerate() {
                    m.set(i, jj, cell.to_value()?);
                }
            }
            CMatrix::Numeric(m)
        }
        other => return Err(Error::invalid(format!("unknown backend {other}"))),
    };
    Ok(MonodromyData {
        mu,
        r_mat: int_matrix_from_json(&j.r)?,
        eta: int_matrix_from_json(&j.eta)?,
        stokes: int_matrix_from_json(&j.stokes)?,
        c_mat,
        meta: DataMeta { space: j.space.clone(), dim: j.dim, chamber: j.chamber },
    })
}

/// One row of the bundled Stokes-matrix tables.
#[derive(Serialize, Deserialize, Clone)]
pub struct StokesTableRow {
    pub space: String,
    pub k: usize,
    pub r: usize,
    pub chamber: usize,
    pub stokes: Vec<Vec<i64>>,
}

impl StokesTableRow {
    pub fn matrix(&self) -> IntMatrix {
        IntMatrix::from_fn(self.stokes.len(), self.stokes[0].len(), |i, j| {
            BigInt::from(self.stokes[i][j])
        })
    }
}

/// The versioned table fixtures shipped with the crate.
pub fn bundled_stokes_tables() -> Vec<StokesTableRow> {
    serde_json::from_str(include_str!("../fixtures/stokes_tables.json"))
        .expect("fixture file is well-formed")
}

/// One validator line: `{constraint, pass, residual}`.
#[derive(Serialize, Deserialize)]
pub struct ConstraintJson {
    pub constraint: String,
    pub pass: bool,
    pub residual: Option<String>,
}

pub fn report_to_json(r: &ValidationReport) -> Vec<ConstraintJson> {
    r.results
        .iter()
        .map(|c: &ConstraintResult| ConstraintJson {
            constraint: c.name.to_string(),
            pass: c.pass,
            residual: c.residual.clone(),
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::projective::{canonical_data, Backend};

    #[test]
    fn monodromy_json_round_trip_symbolic() {
        let d = canonical_data(3, Backend::Symbolic);
        let j = monodromy_to_json(&d);
        let s = serde_json::to_string(&j).unwrap();
        let j2: MonodromyJson = serde_json::from_str(&s).unwrap();
        let d2 = monodromy_from_json(&j2).unwrap();
        assert_eq!(d2.stokes, d.stokes);
        assert_eq!(d2.mu, d.mu);
        match (&d.c_mat, &d2.c_mat) {
            (CMatrix::Symbolic(a), CMatrix::Symbolic(b)) => assert_eq!(a, b),
            _ => panic!("backend changed"),
        }
    }

    #[test]
    fn basis_state_round_trip() {
        use crate::mukai::{mutate, MutationDir};
        let g = crate::mukai::beilinson_gram(3);
        let st = ExceptionalBasisState::new(g, vec!["a".into(), "b".into(), "c".into()]).unwrap();
        let st = mutate(&st, 1, MutationDir::Left).unwrap();
        let st = mutate(&st, 2, MutationDir::Right).unwrap();
        let j = basis_state_to_json(&st);
        assert_eq!(j.history, vec!["b+1", "b-2"]);
        let s = serde_json::to_string(&j).unwrap();
        let j2: BasisStateJson = serde_json::from_str(&s).unwrap();
        let st2 = basis_state_from_json(&j2).unwrap();
        assert_eq!(st2.gram, st.gram);
        assert_eq!(st2.labels, st.labels);
    }

    #[test]
    fn complex_json_round_trip() {
        let bits = 192;
        let z = ApproxComplex::new(
            BigFloat::parse_decimal("3.25", bits).unwrap(),
            BigFloat::parse_decimal("-0.125", bits).unwrap(),
        );
        let j = ComplexJson::from_value(&z, 40);
        let z2 = j.to_value().unwrap();
        assert!((&z - &z2).abs() < BigFloat::parse_decimal("0.0000000000000000001", bits).unwrap());
    }

    #[test]
    fn class_json_round_trip() {
        let c = crate::cohomology::gamma_class(4, crate::cohomology::ClassSign::Minus);
        let j = coh_class_to_json(&c);
        let c2 = coh_class_from_json(&j).unwrap();
        assert_eq!(c.coeffs, c2.coeffs);
        let e = crate::cohomology::lambda_tangent_kclass(2, 1, 4).unwrap();
        let j = k_class_to_json(&e);
        let e2 = k_class_from_json(&j).unwrap();
        assert_eq!(e, e2);
    }
}
