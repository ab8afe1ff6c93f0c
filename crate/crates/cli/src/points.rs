//! Point and coefficient-table input for `eval`.

use std::collections::BTreeMap;
use std::path::Path;

use genosc::model::{cartesian_from_polar, cartesian_from_spherical, BasisState};
use genosc::{CartesianState, CylindricalState, PolarState, SphericalState};

use crate::Failure;

/// Points as given, plus their Cartesian form.
pub struct PointSet {
    pub columns: Vec<String>,
    pub raw: Vec<Vec<f64>>,
    pub cartesian: Vec<Vec<f64>>,
}

#[derive(Clone, Copy)]
enum Coords {
    Cartesian,
    Polar,
    Cylindrical,
    Spherical,
}

impl Coords {
    fn from_header(cols: &[String]) -> Option<Self> {
        let c: Vec<&str> = cols.iter().map(String::as_str).collect();
        match c.as_slice() {
            ["x"] | ["x", "y"] | ["x", "y", "z"] => Some(Coords::Cartesian),
            ["rho", "phi"] => Some(Coords::Polar),
            ["rho", "phi", "z"] => Some(Coords::Cylindrical),
            ["r", "theta", "phi"] => Some(Coords::Spherical),
            _ => None,
        }
    }

    fn to_cartesian(self, v: &[f64]) -> Vec<f64> {
        match self {
            Coords::Cartesian => v.to_vec(),
            Coords::Polar => cartesian_from_polar(v[0], v[1]).to_vec(),
            Coords::Cylindrical => {
                let [x, y] = cartesian_from_polar(v[0], v[1]);
                vec![x, y, v[2]]
            }
            Coords::Spherical => cartesian_from_spherical(v[0], v[1], v[2]).to_vec(),
        }
    }
}

impl PointSet {
    pub fn dim(&self) -> usize {
        self.columns.len()
    }

    /// Cartesian points from `--point x,y[,z]` values.
    pub fn inline(values: &[String], dim: usize) -> Result<Self, Failure> {
        if values.is_empty() {
            return Err(Failure::Usage("give at least one --point or a --points file".into()));
        }
        let mut raw = Vec::with_capacity(values.len());
        for v in values {
            let p: Vec<f64> = v
                .split(',')
                .map(|t| t.trim().parse::<f64>())
                .collect::<Result<_, _>>()
                .map_err(|e| Failure::Usage(format!("bad point '{v}': {e}")))?;
            if p.len() != dim {
                return Err(Failure::Usage(format!("point '{v}' has {} coordinates, system has {dim}", p.len())));
            }
            raw.push(p);
        }
        let columns = ["x", "y", "z"][..dim].iter().map(|s| s.to_string()).collect();
        Ok(Self { columns, cartesian: raw.clone(), raw })
    }
}

pub fn read_points(path: &Path) -> Result<PointSet, Failure> {
    let io = |e: csv::Error| Failure::Io(format!("{}: {e}", path.display()));
    let mut rdr = csv::ReaderBuilder::new().trim(csv::Trim::All).from_path(path).map_err(io)?;
    let columns: Vec<String> = rdr.headers().map_err(io)?.iter().map(|h| h.to_ascii_lowercase()).collect();
    let coords = Coords::from_header(&columns).ok_or_else(|| {
        Failure::Usage(format!(
            "{}: header '{}' is not one of x,y[,z] / rho,phi[,z] / r,theta,phi",
            path.display(),
            columns.join(",")
        ))
    })?;
    let mut raw = Vec::new();
    for (line, rec) in rdr.records().enumerate() {
        let rec = rec.map_err(io)?;
        let v: Vec<f64> = rec
            .iter()
            .map(|t| t.parse::<f64>())
            .collect::<Result<_, _>>()
            .map_err(|e| Failure::Usage(format!("{} row {}: {e}", path.display(), line + 2)))?;
        raw.push(v);
    }
    let cartesian = raw.iter().map(|v| coords.to_cartesian(v)).collect();
    Ok(PointSet { columns, raw, cartesian })
}

/// A coefficient table as written by `coeffs --format csv`.
pub enum Expansion {
    /// `(n1, n2, m) -> W`
    W(BTreeMap<(usize, usize, usize), f64>),
    /// `(n3, n_rho, q, m) -> V`
    V(BTreeMap<(usize, usize, usize, usize), f64>),
    /// `(n1, n2, n3, m, q) -> C`
    C(BTreeMap<(usize, usize, usize, usize, usize), f64>),
}

pub fn read_expansion(path: &Path) -> Result<Expansion, Failure> {
    let io = |e: csv::Error| Failure::Io(format!("{}: {e}", path.display()));
    let mut rdr = csv::ReaderBuilder::new().trim(csv::Trim::All).from_path(path).map_err(io)?;
    let header: Vec<String> = rdr.headers().map_err(io)?.iter().map(str::to_string).collect();
    let labels = header.len().checked_sub(2).filter(|_| header.ends_with(&["value".into(), "route".into()]));
    let Some(labels) = labels else {
        return Err(Failure::Usage(format!("{}: not a coefficient table", path.display())));
    };
    let mut rows = Vec::new();
    for (line, rec) in rdr.records().enumerate() {
        let rec = rec.map_err(io)?;
        let bad = |what: String| Failure::Usage(format!("{} row {}: {what}", path.display(), line + 2));
        let idx: Vec<usize> = (0..labels)
            .map(|i| rec[i].parse::<usize>().map_err(|e| bad(format!("{e}"))))
            .collect::<Result<_, _>>()?;
        let value: f64 = rec[labels].parse().map_err(|e| bad(format!("{e}")))?;
        rows.push((idx, value));
    }
    let names: Vec<&str> = header[..labels].iter().map(String::as_str).collect();
    Ok(match names.as_slice() {
        ["n1", "n2", "m"] => Expansion::W(rows.into_iter().map(|(i, v)| ((i[0], i[1], i[2]), v)).collect()),
        ["n3", "n_rho", "q", "m"] => {
            Expansion::V(rows.into_iter().map(|(i, v)| ((i[0], i[1], i[2], i[3]), v)).collect())
        }
        ["n1", "n2", "n3", "m", "q"] => {
            Expansion::C(rows.into_iter().map(|(i, v)| ((i[0], i[1], i[2], i[3], i[4]), v)).collect())
        }
        _ => return Err(Failure::Usage(format!("{}: unknown coefficient columns {}", path.display(), names.join(",")))),
    })
}

impl Expansion {
    /// The state as a combination of states of the table's other basis.
    pub fn terms_for(&self, state: &BasisState) -> Result<Vec<(BasisState, f64)>, Failure> {
        let terms: Vec<(BasisState, f64)> = match (self, state) {
            (Expansion::W(t), BasisState::Cartesian(s)) if s.n.len() == 2 => {
                let (n1, n2) = (s.n[0], s.n[1]);
                t.iter()
                    .filter(|((a, b, _), _)| (*a, *b) == (n1, n2))
                    .map(|(&(_, _, m), &v)| (BasisState::Polar(PolarState { n_rho: n1 + n2 - m, m }), v))
                    .collect()
            }
            (Expansion::W(t), BasisState::Polar(s)) => t
                .iter()
                .filter(|((a, b, m), _)| *m == s.m && a + b == s.n_rho + s.m)
                .map(|(&(a, b, _), &v)| (BasisState::Cartesian(CartesianState::new(&[a, b])), v))
                .collect(),
            (Expansion::V(t), BasisState::Cylindrical(s)) => t
                .iter()
                .filter(|((n3, nr, _, m), _)| (*n3, *nr, *m) == (s.n3, s.n_rho, s.m))
                .map(|(&(n3, nr, q, m), &v)| (BasisState::Spherical(SphericalState { n_r: n3 + nr - q, q, m }), v))
                .collect(),
            (Expansion::V(t), BasisState::Spherical(s)) => t
                .iter()
                .filter(|((n3, nr, q, m), _)| (*q, *m) == (s.q, s.m) && n3 + nr == s.n_r + s.q)
                .map(|(&(n3, nr, _, m), &v)| (BasisState::Cylindrical(CylindricalState { n_rho: nr, m, n3 }), v))
                .collect(),
            (Expansion::C(t), BasisState::Cartesian(s)) if s.n.len() == 3 => {
                let n = s.principal();
                t.iter()
                    .filter(|((a, b, c, _, _), _)| [*a, *b, *c] == s.n[..])
                    .map(|(&(_, _, _, m, q), &v)| (BasisState::Spherical(SphericalState { n_r: n - m - q, q, m }), v))
                    .collect()
            }
            (Expansion::C(t), BasisState::Spherical(s)) => t
                .iter()
                .filter(|((a, b, c, m, q), _)| (*m, *q) == (s.m, s.q) && a + b + c == s.principal())
                .map(|(&(a, b, c, _, _), &v)| (BasisState::Cartesian(CartesianState::new(&[a, b, c])), v))
                .collect(),
            _ => {
                return Err(Failure::Usage(format!(
                    "this coefficient table does not expand {:?} states",
                    state.basis()
                )))
            }
        };
        if terms.is_empty() {
            return Err(Failure::Usage("the coefficient table has no entries for this state".into()));
        }
        Ok(terms)
    }
}
