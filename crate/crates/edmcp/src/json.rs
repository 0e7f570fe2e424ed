//! JSON encodings for scalars, matrices and factorizations.
//!
//! Rationals are written as `"p/q"` in lowest terms with a positive
//! denominator, always including the denominator. Irrational scalars are
//! `{"rat": "p/q", "coef": "p/q", "rad": s}` with `s` square-free.

use std::str::FromStr;

use edmcp_core::arith::common_radicand;
use edmcp_core::construct::LrlPair;
use edmcp_core::factor::{NumericFactor, VerificationReport};
use edmcp_core::{Atom, CpFactorization, QuadSurd, Rational, Scalar, SymMatrix};
use serde::ser::SerializeMap;
use serde::{Deserialize, Serialize, Serializer};

use crate::error::CliError;

pub fn format_rational(r: &Rational) -> String {
    format!("{}/{}", r.numer(), r.denom())
}

pub fn parse_rational(s: &str) -> Result<Rational, CliError> {
    let t = s.trim();
    let r = Rational::from_str(t).map_err(|_| CliError::input(format!("bad rational {s:?}")))?;
    Ok(r)
}

/// Parses a scalar given on the command line: `p/q`, an integer, or the JSON object form.
pub fn parse_scalar_arg(s: &str) -> Result<Scalar, CliError> {
    let t = s.trim();
    if t.starts_with('{') {
        let raw: JsonScalar = serde_json::from_str(t)
            .map_err(|e| CliError::input(format!("bad scalar {s:?}: {e}")))?;
        Ok(raw.0)
    } else {
        parse_rational(t).map(Scalar::from)
    }
}

/// Serde wrapper around an exact scalar.
#[derive(Clone, Debug, PartialEq, Eq, Deserialize)]
#[serde(try_from = "RawScalar")]
pub struct JsonScalar(pub Scalar);

#[derive(Deserialize)]
#[serde(untagged)]
enum RawScalar {
    Int(i64),
    Text(String),
    Surd {
        #[serde(default)]
        rat: Option<String>,
        #[serde(default)]
        coef: Option<String>,
        rad: u64,
    },
}

impl TryFrom<RawScalar> for JsonScalar {
    type Error = CliError;

    fn try_from(raw: RawScalar) -> Result<Self, CliError> {
        let v = match raw {
            RawScalar::Int(v) => Scalar::from_int(v),
            RawScalar::Text(s) => Scalar::from(parse_rational(&s)?),
            RawScalar::Surd { rat, coef, rad } => {
                let rat = rat.as_deref().map(parse_rational).transpose()?;
                let coef = coef.as_deref().map(parse_rational).transpose()?;
                QuadSurd::new(rat.unwrap_or_default(), coef.unwrap_or_default(), rad)
            }
        };
        Ok(JsonScalar(v))
    }
}

impl Serialize for JsonScalar {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        let x = &self.0;
        if x.is_rational() {
            return s.serialize_str(&format_rational(x.rat()));
        }
        let mut m = s.serialize_map(Some(3))?;
        m.serialize_entry("rat", &format_rational(x.rat()))?;
        m.serialize_entry("coef", &format_rational(x.coef()))?;
        m.serialize_entry("rad", &x.radicand())?;
        m.end()
    }
}

fn wrap(v: &[Scalar]) -> Vec<JsonScalar> {
    v.iter().cloned().map(JsonScalar).collect()
}

fn unwrap(v: Vec<JsonScalar>) -> Vec<Scalar> {
    v.into_iter().map(|s| s.0).collect()
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Field {
    pub rad: u64,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum Entries {
    Flat(Vec<JsonScalar>),
    Nested(Vec<Vec<JsonScalar>>),
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct MatrixFile {
    pub n: usize,
    pub entries: Entries,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub field: Option<Field>,
}

fn check_field(field: Option<Field>, values: &[&Scalar]) -> Result<(), CliError> {
    let rad = common_radicand(values.iter().copied()).map_err(CliError::input_core)?;
    if let Some(f) = field {
        let declared = edmcp_core::arith::square_free_part(f.rad).1;
        let declared = if declared == 1 { 0 } else { declared };
        if rad != 0 && rad != declared {
            return Err(CliError::input(format!(
                "entries use sqrt({rad}) but the field declares sqrt({})",
                f.rad
            )));
        }
    }
    Ok(())
}

impl MatrixFile {
    pub fn from_matrix(a: &SymMatrix) -> Self {
        let rad = a.radicand().unwrap_or(0);
        MatrixFile {
            n: a.dim(),
            entries: Entries::Flat(a.rows().flat_map(wrap).collect()),
            field: (rad != 0).then_some(Field { rad }),
        }
    }

    pub fn to_matrix(&self) -> Result<SymMatrix, CliError> {
        let n = self.n;
        let rows: Vec<Vec<Scalar>> = match &self.entries {
            Entries::Flat(v) => {
                if v.len() != n * n {
                    return Err(CliError::input(format!(
                        "expected {} entries for n = {n}, got {}",
                        n * n,
                        v.len()
                    )));
                }
                v.chunks(n.max(1)).map(|r| unwrap(r.to_vec())).collect()
            }
            Entries::Nested(rows) => {
                if rows.len() != n || rows.iter().any(|r| r.len() != n) {
                    return Err(CliError::input(format!("expected {n} rows of {n} entries")));
                }
                rows.iter().map(|r| unwrap(r.clone())).collect()
            }
        };
        check_field(self.field, &rows.iter().flatten().collect::<Vec<_>>())?;
        SymMatrix::try_from_rows(rows).map_err(CliError::input_core)
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct AtomFile {
    pub weight: JsonScalar,
    pub support: Vec<JsonScalar>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct NumericFile {
    pub digits: u32,
    /// `dim x atoms`, row-major.
    pub rows: Vec<Vec<f64>>,
    pub max_residual: f64,
}

impl From<NumericFactor> for NumericFile {
    fn from(f: NumericFactor) -> Self {
        NumericFile {
            digits: f.decimal_digits,
            rows: f.rows,
            max_residual: f.max_residual,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct FactorizationFile {
    pub dim: usize,
    pub integral: bool,
    pub field: Field,
    pub atoms: Vec<AtomFile>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub status: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub nodes: Option<u64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub numeric: Option<NumericFile>,
}

impl FactorizationFile {
    pub fn from_factorization(f: &CpFactorization) -> Self {
        FactorizationFile {
            dim: f.dim(),
            integral: f.is_integral(),
            field: Field {
                rad: f.radicand().unwrap_or(0),
            },
            atoms: f
                .atoms()
                .iter()
                .map(|a| AtomFile {
                    weight: JsonScalar(a.weight().clone()),
                    support: wrap(a.support()),
                })
                .collect(),
            status: None,
            nodes: None,
            numeric: None,
        }
    }

    /// Reads atoms without the nonnegativity checks so the verifier can report them.
    pub fn to_factorization(&self) -> Result<CpFactorization, CliError> {
        let mut f = CpFactorization::new(self.dim);
        let mut values = Vec::new();
        for (k, a) in self.atoms.iter().enumerate() {
            if a.support.len() != self.dim {
                return Err(CliError::input(format!(
                    "atom {} has {} entries, dim is {}",
                    k + 1,
                    a.support.len(),
                    self.dim
                )));
            }
            values.push(&a.weight.0);
            values.extend(a.support.iter().map(|s| &s.0));
        }
        check_field(Some(self.field), &values)?;
        for a in &self.atoms {
            let atom = Atom::new_unchecked(a.weight.0.clone(), unwrap(a.support.clone()));
            f.push(atom).map_err(CliError::input_core)?;
        }
        f.set_integral_unchecked(self.integral);
        Ok(f)
    }
}

/// Search result when no certificate was produced.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SearchMiss {
    pub dim: usize,
    pub status: String,
    pub nodes: u64,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct LrlFile {
    pub n: usize,
    /// `n x 3`, nonnegative.
    pub l: Vec<[i128; 3]>,
    pub r: [[i64; 3]; 3],
}

impl From<&LrlPair> for LrlFile {
    fn from(p: &LrlPair) -> Self {
        LrlFile {
            n: p.dim(),
            l: p.l.clone(),
            r: p.r,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct DiscrepancyFile {
    /// 1-based.
    pub row: usize,
    pub col: usize,
    pub expected: JsonScalar,
    pub got: JsonScalar,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ReportFile {
    pub passed: bool,
    pub gram_matches: bool,
    pub columns_nonneg: bool,
    pub kernel_orthogonal: bool,
    pub integrality_ok: bool,
    pub kernel_dim: usize,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub first_discrepancy: Option<DiscrepancyFile>,
    /// 1-based `[atom, kernel vector]`.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub first_kernel_violation: Option<[usize; 2]>,
}

impl ReportFile {
    pub fn new(r: &VerificationReport, kernel_dim: usize) -> Self {
        ReportFile {
            passed: r.passed(),
            gram_matches: r.gram_matches,
            columns_nonneg: r.columns_nonneg,
            kernel_orthogonal: r.kernel_orthogonal,
            integrality_ok: r.integrality_ok,
            kernel_dim,
            first_discrepancy: r.first_discrepancy.as_ref().map(|d| DiscrepancyFile {
                row: d.row + 1,
                col: d.col + 1,
                expected: JsonScalar(d.expected.clone()),
                got: JsonScalar(d.got.clone()),
            }),
            first_kernel_violation: r.first_kernel_violation.map(|(a, k)| [a + 1, k + 1]),
        }
    }
}

pub fn to_json<T: Serialize>(v: &T) -> String {
    let mut s = serde_json::to_string_pretty(v).expect("serializable value");
    s.push('\n');
    s
}

pub fn from_json<T: for<'de> Deserialize<'de>>(text: &str, what: &str) -> Result<T, CliError> {
    serde_json::from_str(text).map_err(|e| CliError::input(format!("cannot parse {what}: {e}")))
}

#[cfg(test)]
mod tests {
    use super::*;
    use edmcp_core::arith::rational;
    use edmcp_core::construct::optimal_factorize;
    use edmcp_core::edm::build_bn;

    #[test]
    fn rationals_keep_denominator() {
        let s = serde_json::to_string(&JsonScalar(Scalar::from_int(35))).unwrap();
        assert_eq!(s, "\"35/1\"");
        let s = serde_json::to_string(&JsonScalar(Scalar::from(rational(-6, 4)))).unwrap();
        assert_eq!(s, "\"-3/2\"");
    }

    #[test]
    fn scalar_forms_parse() {
        let parse = |t: &str| serde_json::from_str::<JsonScalar>(t).unwrap().0;
        assert_eq!(parse("7"), Scalar::from_int(7));
        assert_eq!(parse("\"14/4\""), Scalar::from(rational(7, 2)));
        let q = parse(r#"{"rad":35,"coef":"1/5"}"#);
        assert_eq!(&q * &q, Scalar::from(rational(7, 5)));
        assert!(serde_json::from_str::<JsonScalar>("\"1/0\"").is_err());
        assert!(serde_json::from_str::<JsonScalar>("\"x\"").is_err());
    }

    #[test]
    fn surd_round_trip() {
        let x = QuadSurd::new(rational(1, 2), rational(-3, 7), 12);
        let s = serde_json::to_string(&JsonScalar(x.clone())).unwrap();
        assert_eq!(s, r#"{"rat":"1/2","coef":"-6/7","rad":3}"#);
        assert_eq!(serde_json::from_str::<JsonScalar>(&s).unwrap().0, x);
    }

    #[test]
    fn matrix_flat_and_nested() {
        let b = build_bn(3).unwrap();
        let text = to_json(&MatrixFile::from_matrix(&b));
        let back: MatrixFile = from_json(&text, "matrix").unwrap();
        assert_eq!(back.to_matrix().unwrap(), b);
        let nested = r#"{"n":2,"entries":[["1","1"],["1","1"]]}"#;
        let m: MatrixFile = from_json(nested, "matrix").unwrap();
        assert_eq!(m.to_matrix().unwrap(), build_bn(2).unwrap());
    }

    #[test]
    fn asymmetric_or_short_matrix_is_rejected() {
        let m: MatrixFile = from_json(r#"{"n":2,"entries":[1,2,3,1]}"#, "matrix").unwrap();
        assert_eq!(m.to_matrix().unwrap_err().code(), 2);
        let m: MatrixFile = from_json(r#"{"n":2,"entries":[1,2,2]}"#, "matrix").unwrap();
        assert_eq!(m.to_matrix().unwrap_err().code(), 2);
    }

    #[test]
    fn field_must_match_entries() {
        let text = r#"{"n":1,"entries":[{"rad":5,"coef":"1/1"}],"field":{"rad":7}}"#;
        let m: MatrixFile = from_json(text, "matrix").unwrap();
        assert!(m.to_matrix().is_err());
        let text = r#"{"n":1,"entries":[{"rad":5,"coef":"1/1"}],"field":{"rad":20}}"#;
        let m: MatrixFile = from_json(text, "matrix").unwrap();
        assert!(m.to_matrix().is_ok());
    }

    #[test]
    fn factorization_round_trip_is_exact() {
        let f = optimal_factorize(7).unwrap();
        let text = to_json(&FactorizationFile::from_factorization(&f));
        let back: FactorizationFile = from_json(&text, "factorization").unwrap();
        assert_eq!(back.to_factorization().unwrap(), f);
        assert_eq!(to_json(&back), text);
    }
}
