//! Serialization of matrix quadruples for export: JSON as row-major
//! array-of-arrays with a header naming the component ordering, and a long
//! CSV format (matrix,row,col,value) with 17-significant-digit scientific
//! notation so parsed values round-trip exactly.

use serde::{Deserialize, Serialize};

use crate::sym_primary::MatrixQuadruple;
use crate::{Matrix8, COMPONENT_NAMES};

/// JSON-facing image of a quadruple. `lambda` is None for the plain
/// symmetrization and records the family parameter otherwise.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct QuadrupleDump {
    pub ordering: Vec<String>,
    pub lambda: Option<f64>,
    pub a0: Vec<Vec<f64>>,
    pub a1: Vec<Vec<f64>>,
    pub a2: Vec<Vec<f64>>,
    pub a3: Vec<Vec<f64>>,
}

fn rows(m: &Matrix8) -> Vec<Vec<f64>> {
    (0..8).map(|r| (0..8).map(|c| m[(r, c)]).collect()).collect()
}

impl QuadrupleDump {
    pub fn new(quad: &MatrixQuadruple, lambda: Option<f64>) -> Self {
        QuadrupleDump {
            ordering: COMPONENT_NAMES.iter().map(|s| s.to_string()).collect(),
            lambda,
            a0: rows(&quad.a0),
            a1: rows(&quad.a[0]),
            a2: rows(&quad.a[1]),
            a3: rows(&quad.a[2]),
        }
    }

    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string(self).expect("dump serialization cannot fail");
        s.push('\n');
        s
    }

    /// Long CSV: header `matrix,row,col,value`, one `lambda` record when a
    /// family parameter is present, then all 4x64 entries in matrix/row/col
    /// order.
    pub fn to_csv(&self) -> String {
        let mut out = String::from("matrix,row,col,value\n");
        if let Some(lam) = self.lambda {
            out.push_str(&format!("lambda,,,{lam:.16e}\n"));
        }
        for (name, m) in [
            ("a0", &self.a0),
            ("a1", &self.a1),
            ("a2", &self.a2),
            ("a3", &self.a3),
        ] {
            for (r, row) in m.iter().enumerate() {
                for (c, v) in row.iter().enumerate() {
                    out.push_str(&format!("{name},{r},{c},{v:.16e}\n"));
                }
            }
        }
        out
    }
}
