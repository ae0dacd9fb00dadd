//! JSON forms of matrices and invariant points, with entries written in the
//! scalar literal grammar of [`crate::padic::parse_quad`].

use serde::{Deserialize, Serialize};

use crate::error::{LabError, Result};
use crate::geometry::{Element, GlnElement, HnElement, InvariantPoint, Side};
use crate::linalg::Matrix;
use crate::padic::{parse_padic, parse_quad, Field, FieldConfig, LocalScalar, PAdic, Quad};

/// `num` or `num/den` for an element of `F`.
pub fn format_padic(x: &PAdic) -> String {
    let (num, den) = x.to_rational();
    if den == 1.into() {
        num.to_string()
    } else {
        format!("{num}/{den}")
    }
}

/// `re`, `im*w` or `re+im*w`, with `w` standing for `ω`.
pub fn format_quad(z: &Quad) -> String {
    let re = format_padic(&z.re);
    if z.im.is_zero() {
        return re;
    }
    let im = format_padic(&z.im);
    let im_term = match im.as_str() {
        "1" => "w".to_string(),
        "-1" => "-w".to_string(),
        _ => format!("{im}*w"),
    };
    if z.re.is_zero() {
        im_term
    } else if im_term.starts_with('-') {
        format!("{re}{im_term}")
    } else {
        format!("{re}+{im_term}")
    }
}

/// `{"p":3,"u":-1,"n":2,"side":"u","entries":[["1","w"],["-w","0"]]}`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct MatrixJson {
    pub p: u64,
    pub u: i64,
    pub n: usize,
    pub side: Side,
    pub entries: Vec<Vec<String>>,
}

impl MatrixJson {
    pub fn from_element(e: &Element) -> Self {
        let f = e.field();
        let entries = match e {
            Element::U(x) => rows(x.matrix(), format_quad),
            Element::Gl(y) => rows(y.matrix(), format_padic),
        };
        MatrixJson { p: f.p(), u: f.u(), n: e.n(), side: e.side(), entries }
    }

    pub fn field_config(&self, precision: u32) -> Result<FieldConfig> {
        let cfg = FieldConfig::with_u(self.p, self.u, precision)?;
        cfg.validate()?;
        Ok(cfg)
    }

    /// Parses the entries over `field`, whose `p` and `u` must agree with the
    /// header.
    pub fn to_element(&self, field: &Field) -> Result<Element> {
        if field.p() != self.p || field.u() != self.u {
            return Err(LabError::InvalidConfig("matrix header does not match the field".into()));
        }
        if self.n == 0 || self.entries.len() != self.n || self.entries.iter().any(|r| r.len() != self.n) {
            return Err(LabError::Parse(format!("entries must form a {0}x{0} array", self.n)));
        }
        Ok(match self.side {
            Side::U => {
                let rows = parse_rows(&self.entries, |s| parse_quad(s, field))?;
                Element::U(HnElement::new(Matrix::from_rows(field, rows)?)?)
            }
            Side::Gl => {
                let rows = parse_rows(&self.entries, |s| parse_padic(s, field))?;
                Element::Gl(GlnElement::new(Matrix::from_rows(field, rows)?)?)
            }
        })
    }
}

fn rows<S: LocalScalar>(m: &Matrix<S>, fmt: fn(&S) -> String) -> Vec<Vec<String>> {
    (0..m.rows()).map(|i| m.row(i).iter().map(fmt).collect()).collect()
}

fn parse_rows<S>(entries: &[Vec<String>], parse: impl Fn(&str) -> Result<S>) -> Result<Vec<Vec<S>>> {
    entries.iter().map(|r| r.iter().map(|s| parse(s)).collect()).collect()
}

/// `{"n":2,"charpoly":["-1","-1"],"moments":["0"]}`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct InvariantJson {
    pub n: usize,
    pub charpoly: Vec<String>,
    pub moments: Vec<String>,
}

impl InvariantJson {
    pub fn from_point(a: &InvariantPoint) -> Self {
        InvariantJson {
            n: a.n,
            charpoly: a.charpoly.iter().map(format_padic).collect(),
            moments: a.moments.iter().map(format_padic).collect(),
        }
    }

    pub fn to_point(&self, field: &Field) -> Result<InvariantPoint> {
        if self.n == 0 || self.charpoly.len() != self.n || self.moments.len() != self.n - 1 {
            return Err(LabError::Parse(format!(
                "n = {} needs {} charpoly coefficients and {} moments",
                self.n,
                self.n,
                self.n.saturating_sub(1)
            )));
        }
        let parse = |v: &[String]| v.iter().map(|s| parse_padic(s, field)).collect::<Result<Vec<_>>>();
        Ok(InvariantPoint::new(self.n, parse(&self.charpoly)?, parse(&self.moments)?))
    }
}
