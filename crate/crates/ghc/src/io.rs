//! JSON file formats.
//!
//! A complex number is `[re, im]`, a matrix is a row-major nested array of
//! complex numbers, a point of `CP¹` is a complex number or the string
//! `"inf"`.

use std::path::Path;

use ghc_core::cp1_sections::Poly;
use ghc_core::eh_quotient::EHPoint;
use ghc_core::linalg::CMat;
use ghc_core::monopole_r5::{Exponents, GaugeField5, MatPolyField};
use ghc_core::nahm_flow::NahmState;
use ghc_core::{Complex64, ExtendedComplex};
use serde::de::DeserializeOwned;
use serde::{Deserialize, Serialize};

use crate::error::CliError;

pub type JsonComplex = [f64; 2];
pub type JsonMatrix = Vec<Vec<JsonComplex>>;

pub fn complex_to_json(z: Complex64) -> JsonComplex {
    [z.re, z.im]
}

pub fn complex_from_json(z: JsonComplex) -> Complex64 {
    Complex64::new(z[0], z[1])
}

pub fn matrix_to_json(m: &CMat) -> JsonMatrix {
    (0..m.nrows())
        .map(|r| (0..m.ncols()).map(|c| complex_to_json(m[(r, c)])).collect())
        .collect()
}

/// Rows must be nonempty and of equal length.
pub fn matrix_from_json(rows: &JsonMatrix, field: &str) -> Result<CMat, CliError> {
    let nrows = rows.len();
    let ncols = rows.first().map_or(0, Vec::len);
    if nrows == 0 || ncols == 0 {
        return Err(CliError::schema(field, "matrix is empty"));
    }
    if let Some(r) = rows.iter().position(|row| row.len() != ncols) {
        return Err(CliError::schema(
            &format!("{field}[{r}]"),
            &format!("row has {} entries, expected {ncols}", rows[r].len()),
        ));
    }
    Ok(CMat::from_fn(nrows, ncols, |r, c| complex_from_json(rows[r][c])))
}

fn square_from_json(rows: &JsonMatrix, field: &str) -> Result<CMat, CliError> {
    let m = matrix_from_json(rows, field)?;
    if m.nrows() != m.ncols() {
        return Err(CliError::schema(
            field,
            &format!("expected a square matrix, got {}x{}", m.nrows(), m.ncols()),
        ));
    }
    Ok(m)
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PolyJson {
    pub k: usize,
    pub coeffs: Vec<JsonComplex>,
}

impl PolyJson {
    pub fn from_poly(p: &Poly) -> Self {
        PolyJson {
            k: p.k(),
            coeffs: p.coeffs().iter().map(|&z| complex_to_json(z)).collect(),
        }
    }

    pub fn to_poly(&self, field: &str) -> Result<Poly, CliError> {
        if self.coeffs.len() != self.k + 1 {
            return Err(CliError::schema(
                &format!("{field}.coeffs"),
                &format!("has {} entries, expected k + 1 = {}", self.coeffs.len(), self.k + 1),
            ));
        }
        Ok(Poly::new(self.coeffs.iter().map(|&z| complex_from_json(z)).collect()))
    }
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PointJson {
    pub z1: PolyJson,
    pub z2: PolyJson,
    pub w1: PolyJson,
    pub w2: PolyJson,
}

impl PointJson {
    pub fn from_point(p: &EHPoint) -> Self {
        PointJson {
            z1: PolyJson::from_poly(p.z1()),
            z2: PolyJson::from_poly(p.z2()),
            w1: PolyJson::from_poly(p.w1()),
            w2: PolyJson::from_poly(p.w2()),
        }
    }

    pub fn to_point(&self) -> Result<EHPoint, CliError> {
        let k = self.z1.k;
        for (name, p) in [("z2", &self.z2), ("w1", &self.w1), ("w2", &self.w2)] {
            if p.k != k {
                return Err(CliError::schema(
                    &format!("{name}.k"),
                    &format!("is {}, but z1.k is {k}", p.k),
                ));
            }
        }
        Ok(EHPoint::new(
            self.z1.to_poly("z1")?,
            self.z2.to_poly("z2")?,
            self.w1.to_poly("w1")?,
            self.w2.to_poly("w2")?,
        )?)
    }
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct StateJson {
    pub alpha: JsonMatrix,
    pub beta: JsonMatrix,
    pub gamma: JsonMatrix,
}

impl StateJson {
    pub fn from_state(s: &NahmState) -> Self {
        StateJson {
            alpha: matrix_to_json(&s.alpha),
            beta: matrix_to_json(&s.beta),
            gamma: matrix_to_json(&s.gamma),
        }
    }

    pub fn to_state(&self) -> Result<NahmState, CliError> {
        let alpha = square_from_json(&self.alpha, "alpha")?;
        let n = alpha.nrows();
        let beta = square_from_json(&self.beta, "beta")?;
        let gamma = square_from_json(&self.gamma, "gamma")?;
        for (name, m) in [("beta", &beta), ("gamma", &gamma)] {
            if m.nrows() != n {
                return Err(CliError::schema(name, &format!("is {0}x{0}, alpha is {n}x{n}", m.nrows())));
            }
        }
        Ok(NahmState::new(alpha, beta, gamma)?)
    }
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TermJson {
    pub exponents: Exponents,
    pub matrix: JsonMatrix,
}

/// `m × m` coefficients, total degree at most `maxdeg`.
#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FieldsJson {
    pub m: usize,
    pub maxdeg: u32,
    pub a: [Vec<TermJson>; 5],
    pub phi: [Vec<TermJson>; 3],
}

fn terms_to_json(f: &MatPolyField) -> Vec<TermJson> {
    f.terms()
        .iter()
        .map(|(e, c)| TermJson {
            exponents: *e,
            matrix: matrix_to_json(c),
        })
        .collect()
}

impl FieldsJson {
    pub fn from_fields(f: &GaugeField5) -> Self {
        FieldsJson {
            m: f.m(),
            maxdeg: f.maxdeg(),
            a: core::array::from_fn(|i| terms_to_json(&f.a[i])),
            phi: core::array::from_fn(|j| terms_to_json(&f.phi[j])),
        }
    }

    pub fn to_fields(&self) -> Result<GaugeField5, CliError> {
        if self.m == 0 {
            return Err(CliError::schema("m", "must be positive"));
        }
        let field = |terms: &[TermJson], name: String| -> Result<MatPolyField, CliError> {
            let mut f = MatPolyField::zero(self.m, self.maxdeg);
            for (t, term) in terms.iter().enumerate() {
                let at = format!("{name}[{t}]");
                let mat = square_from_json(&term.matrix, &format!("{at}.matrix"))?;
                if mat.nrows() != self.m {
                    return Err(CliError::schema(
                        &format!("{at}.matrix"),
                        &format!("is {0}x{0}, m is {1}", mat.nrows(), self.m),
                    ));
                }
                let deg: u32 = term.exponents.iter().sum();
                if deg > self.maxdeg {
                    return Err(CliError::schema(
                        &format!("{at}.exponents"),
                        &format!("total degree {deg} exceeds maxdeg {}", self.maxdeg),
                    ));
                }
                if f.terms().contains_key(&term.exponents) {
                    return Err(CliError::schema(&format!("{at}.exponents"), "repeated monomial"));
                }
                f.insert(term.exponents, mat)?;
            }
            Ok(f)
        };
        let a = [0, 1, 2, 3, 4].map(|i| field(&self.a[i], format!("a[{i}]")));
        let phi = [0, 1, 2].map(|j| field(&self.phi[j], format!("phi[{j}]")));
        let a = collect_array(a)?;
        let phi = collect_array(phi)?;
        Ok(GaugeField5::new(a, phi)?)
    }
}

fn collect_array<const N: usize>(
    xs: [Result<MatPolyField, CliError>; N],
) -> Result<[MatPolyField; N], CliError> {
    let v: Vec<MatPolyField> = xs.into_iter().collect::<Result<_, _>>()?;
    Ok(v.try_into().expect("length is preserved"))
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(untagged)]
pub enum PointOnLine {
    Finite(JsonComplex),
    Named(String),
}

impl PointOnLine {
    pub fn from_extended(q: ExtendedComplex) -> Self {
        match q {
            ExtendedComplex::Finite(z) => PointOnLine::Finite(complex_to_json(z)),
            ExtendedComplex::Infinity => PointOnLine::Named("inf".into()),
        }
    }

    pub fn to_extended(&self, field: &str) -> Result<ExtendedComplex, CliError> {
        match self {
            PointOnLine::Finite(z) => Ok(ExtendedComplex::Finite(complex_from_json(*z))),
            PointOnLine::Named(s) if s == "inf" => Ok(ExtendedComplex::Infinity),
            PointOnLine::Named(s) => Err(CliError::schema(field, &format!("expected [re, im] or \"inf\", got {s:?}"))),
        }
    }
}

/// `1.5`, `-2+0.5i` style label used in text reports.
pub fn format_point(q: ExtendedComplex) -> String {
    match q {
        ExtendedComplex::Infinity => "inf".into(),
        ExtendedComplex::Finite(z) => format!("{}{:+}i", z.re, z.im),
    }
}

/// Parse a JSON file, reporting the path of the offending field.
pub fn read_json<T: DeserializeOwned>(path: &Path) -> Result<T, CliError> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| CliError::Validation(format!("{}: {e}", path.display())))?;
    parse_json(&text).map_err(|e| match e {
        CliError::Validation(msg) => CliError::Validation(format!("{}: {msg}", path.display())),
        other => other,
    })
}

pub fn parse_json<T: DeserializeOwned>(text: &str) -> Result<T, CliError> {
    let de = &mut serde_json::Deserializer::from_str(text);
    serde_path_to_error::deserialize(de).map_err(|e| {
        let path = e.path().to_string();
        let inner = e.into_inner();
        if path == "." {
            CliError::Validation(format!("malformed JSON: {inner}"))
        } else {
            CliError::Validation(format!("field `{path}`: {inner}"))
        }
    })
}

pub fn read_zetas(path: &Path) -> Result<Vec<Complex64>, CliError> {
    let zs: Vec<JsonComplex> = read_json(path)?;
    if zs.is_empty() {
        return Err(CliError::schema("zetas", "need at least one sample point"));
    }
    Ok(zs.into_iter().map(complex_from_json).collect())
}

pub fn read_q_samples(path: &Path) -> Result<Vec<ExtendedComplex>, CliError> {
    let qs: Vec<PointOnLine> = read_json(path)?;
    if qs.is_empty() {
        return Err(CliError::schema("q_samples", "need at least one sample point"));
    }
    qs.iter()
        .enumerate()
        .map(|(i, q)| q.to_extended(&format!("[{i}]")))
        .collect()
}
