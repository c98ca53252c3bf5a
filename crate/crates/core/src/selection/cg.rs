//! Clebsch-Gordan coefficients for the product `Γ4− ⊗ Γ4−` of the cubic group.
//!
//! The photon polarization transforms as the vector irrep `Γ4−` with rows
//! `(x, y, z)`. The nine product components `l ⊗ l'` are indexed `3 l + l'`.
//! The product decomposes as `Γ1+ ⊕ Γ3+ ⊕ Γ4+ ⊕ Γ5+`; rows of the
//! multi-dimensional irreps are labelled `Γ3+: (u, v)` with
//! `u ∝ 2zz - xx - yy`, `v ∝ xx - yy`; `Γ4+: (x, y, z)` as the components of
//! the antisymmetric (cross) product; `Γ5+: (yz, zx, xy)`.

use std::f64::consts::FRAC_1_SQRT_2;
use std::fmt;
use std::str::FromStr;

use nalgebra::SMatrix;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Cartesian component of a `Γ4−` vector.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Axis {
    X = 0,
    Y = 1,
    Z = 2,
}

impl Axis {
    pub const ALL: [Axis; 3] = [Axis::X, Axis::Y, Axis::Z];
}

/// Index of `l ⊗ l'` in the nine-dimensional product space.
pub fn product_index(l: Axis, lp: Axis) -> usize {
    3 * l as usize + lp as usize
}

/// Exchange symmetry of a component of `Γ4− ⊗ Γ4−`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Symmetry {
    Symmetric,
    Antisymmetric,
}

/// Cubic-group irreps appearing in the two-photon problem.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum IrrepLabel {
    G1Plus,
    G3Plus,
    G4Plus,
    G5Plus,
    G4Minus,
}

impl IrrepLabel {
    /// Components of `Γ4− ⊗ Γ4−`, in table order.
    pub const PRODUCT: [IrrepLabel; 4] = [
        IrrepLabel::G1Plus,
        IrrepLabel::G3Plus,
        IrrepLabel::G4Plus,
        IrrepLabel::G5Plus,
    ];

    pub fn dimension(self) -> usize {
        match self {
            IrrepLabel::G1Plus => 1,
            IrrepLabel::G3Plus => 2,
            IrrepLabel::G4Plus | IrrepLabel::G5Plus | IrrepLabel::G4Minus => 3,
        }
    }

    /// Exchange symmetry inside `Γ4− ⊗ Γ4−`; `None` for `Γ4−`, which does not
    /// occur there.
    pub fn symmetry(self) -> Option<Symmetry> {
        match self {
            IrrepLabel::G1Plus | IrrepLabel::G3Plus | IrrepLabel::G5Plus => {
                Some(Symmetry::Symmetric)
            }
            IrrepLabel::G4Plus => Some(Symmetry::Antisymmetric),
            IrrepLabel::G4Minus => None,
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            IrrepLabel::G1Plus => "G1+",
            IrrepLabel::G3Plus => "G3+",
            IrrepLabel::G4Plus => "G4+",
            IrrepLabel::G5Plus => "G5+",
            IrrepLabel::G4Minus => "G4-",
        }
    }
}

impl fmt::Display for IrrepLabel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for IrrepLabel {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let key = s.trim().replace(['Γ', 'γ'], "G").to_ascii_uppercase();
        match key.as_str() {
            "G1+" => Ok(IrrepLabel::G1Plus),
            "G3+" => Ok(IrrepLabel::G3Plus),
            "G4+" => Ok(IrrepLabel::G4Plus),
            "G5+" => Ok(IrrepLabel::G5Plus),
            "G4-" => Ok(IrrepLabel::G4Minus),
            _ => Err(Error::InvalidModel(format!("unknown irrep {s:?}"))),
        }
    }
}

impl Serialize for IrrepLabel {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(self.name())
    }
}

impl<'de> Deserialize<'de> for IrrepLabel {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let s = String::deserialize(d)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}

/// One row `(μ m | Γ4− l, Γ4− l')` of the coupling table.
#[derive(Clone, Debug, PartialEq)]
pub struct CgRow {
    pub irrep: IrrepLabel,
    pub label: String,
    pub coefficients: [f64; 9],
}

impl CgRow {
    pub fn coefficient(&self, l: Axis, lp: Axis) -> f64 {
        self.coefficients[product_index(l, lp)]
    }
}

/// Coupling coefficients for `Γ4− ⊗ Γ4−`, validated on construction.
#[derive(Clone, Debug, PartialEq)]
pub struct CgTable {
    rows: Vec<CgRow>,
}

const TABLE_TOL: f64 = 1e-12;

impl CgTable {
    /// Builds a table after checking that it is orthogonal, that every row has
    /// the exchange symmetry of its irrep, and that the `Γ1+` row is `δ/√3`.
    pub fn from_rows(rows: Vec<CgRow>) -> Result<Self> {
        let bad = |msg: String| Err(Error::InvalidModel(msg));
        if rows.len() != 9 {
            return bad(format!("expected 9 rows, got {}", rows.len()));
        }
        for mu in IrrepLabel::PRODUCT {
            let n = rows.iter().filter(|r| r.irrep == mu).count();
            if n != mu.dimension() {
                return bad(format!("{mu} has {n} rows, expected {}", mu.dimension()));
            }
        }
        let table = CgTable { rows };
        let dev = (table.matrix() * table.matrix().transpose() - SMatrix::<f64, 9, 9>::identity())
            .abs()
            .max();
        if dev > TABLE_TOL {
            return bad(format!(
                "coefficient matrix not orthogonal (deviation {dev:.3e})"
            ));
        }
        for row in &table.rows {
            let sign = match row.irrep.symmetry() {
                Some(Symmetry::Symmetric) => 1.0,
                Some(Symmetry::Antisymmetric) => -1.0,
                None => return bad(format!("{} is not in the product", row.irrep)),
            };
            for l in Axis::ALL {
                for lp in Axis::ALL {
                    if (row.coefficient(l, lp) - sign * row.coefficient(lp, l)).abs() > TABLE_TOL {
                        return bad(format!(
                            "row {} {} has wrong exchange symmetry",
                            row.irrep, row.label
                        ));
                    }
                }
            }
            if row.irrep == IrrepLabel::G1Plus {
                let s3 = 1.0 / 3f64.sqrt();
                for l in Axis::ALL {
                    for lp in Axis::ALL {
                        let expected = if l == lp { s3 } else { 0.0 };
                        if (row.coefficient(l, lp) - expected).abs() > TABLE_TOL {
                            return bad("G1+ row must be δ/√3".into());
                        }
                    }
                }
            }
        }
        Ok(table)
    }

    pub fn rows(&self) -> &[CgRow] {
        &self.rows
    }

    pub fn rows_of(&self, mu: IrrepLabel) -> impl Iterator<Item = &CgRow> {
        self.rows.iter().filter(move |r| r.irrep == mu)
    }

    /// Row `m` of irrep `mu`.
    pub fn row(&self, mu: IrrepLabel, m: usize) -> Result<&CgRow> {
        self.rows_of(mu).nth(m).ok_or_else(|| {
            Error::InvalidParameter(format!(
                "{mu} has no row {m} (dimension {})",
                mu.dimension()
            ))
        })
    }

    /// The 9×9 matrix with rows `(μ, m)` and columns `(l, l')`.
    pub fn matrix(&self) -> SMatrix<f64, 9, 9> {
        SMatrix::from_fn(|r, c| self.rows[r].coefficients[c])
    }
}

fn row(irrep: IrrepLabel, label: &str, entries: &[(Axis, Axis, f64)]) -> CgRow {
    let mut coefficients = [0.0; 9];
    for &(l, lp, v) in entries {
        coefficients[product_index(l, lp)] = v;
    }
    CgRow {
        irrep,
        label: label.to_string(),
        coefficients,
    }
}

/// The coupling table for `Γ4− ⊗ Γ4−`.
pub fn build_cg_table() -> CgTable {
    use Axis::{X, Y, Z};
    use IrrepLabel::*;
    let s2 = FRAC_1_SQRT_2;
    let s3 = 1.0 / 3f64.sqrt();
    let s6 = 1.0 / 6f64.sqrt();
    let rows = vec![
        row(G1Plus, "1", &[(X, X, s3), (Y, Y, s3), (Z, Z, s3)]),
        row(G3Plus, "u", &[(X, X, -s6), (Y, Y, -s6), (Z, Z, 2.0 * s6)]),
        row(G3Plus, "v", &[(X, X, s2), (Y, Y, -s2)]),
        row(G4Plus, "x", &[(Y, Z, s2), (Z, Y, -s2)]),
        row(G4Plus, "y", &[(Z, X, s2), (X, Z, -s2)]),
        row(G4Plus, "z", &[(X, Y, s2), (Y, X, -s2)]),
        row(G5Plus, "yz", &[(Y, Z, s2), (Z, Y, s2)]),
        row(G5Plus, "zx", &[(Z, X, s2), (X, Z, s2)]),
        row(G5Plus, "xy", &[(X, Y, s2), (Y, X, s2)]),
    ];
    CgTable::from_rows(rows).expect("built-in coupling table is valid")
}
