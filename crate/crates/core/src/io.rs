//! JSON tensor interchange and report serialization.
//!
//! A tensor file is an object with `row_modes`, `col_modes`, `real` (entries in
//! reshape order, first index fastest) and an optional `imag` of the same length.

use std::fs;
use std::path::Path;

use serde::{Deserialize, Serialize};
use serde_json::{Map, Number, Value};

use crate::error::{Error, Result};
use crate::matrix::C64;
use crate::report::CheckReport;
use crate::shape::EinsteinShape;
use crate::tensor::Tensor;

#[derive(Debug, Serialize, Deserialize)]
struct TensorFile {
    row_modes: Vec<usize>,
    col_modes: Vec<usize>,
    real: Vec<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    imag: Option<Vec<f64>>,
}

pub fn parse_tensor(text: &str) -> Result<Tensor> {
    let file: TensorFile = serde_json::from_str(text).map_err(|e| Error::Parse(e.to_string()))?;
    let shape = EinsteinShape::new(file.row_modes, file.col_modes)?;
    if file.real.len() != shape.len() {
        return Err(Error::Parse(format!("shape {shape} needs {} real entries, got {}", shape.len(), file.real.len())));
    }
    let data = match file.imag {
        Some(im) if im.len() != file.real.len() => {
            return Err(Error::Parse(format!("imag has {} entries, real has {}", im.len(), file.real.len())))
        }
        Some(im) => file.real.iter().zip(&im).map(|(&r, &i)| C64::new(r, i)).collect(),
        None => file.real.iter().map(|&r| C64::new(r, 0.0)).collect(),
    };
    Tensor::new(shape, data)
}

pub fn read_tensor(path: &Path) -> Result<Tensor> {
    let text = fs::read_to_string(path).map_err(|e| Error::Parse(format!("{}: {e}", path.display())))?;
    parse_tensor(&text).map_err(|e| match e {
        Error::Parse(msg) => Error::Parse(format!("{}: {msg}", path.display())),
        other => other,
    })
}

/// A float as a JSON number with 17 significant digits; non-finite values become `null`.
pub fn num(x: f64) -> Value {
    if !x.is_finite() {
        return Value::Null;
    }
    let text = format!("{x:.16e}");
    Value::Number(Number::from_string_unchecked(text))
}

pub fn tensor_to_json(t: &Tensor) -> Value {
    let mut obj = Map::new();
    obj.insert("row_modes".into(), Value::from(t.row_modes().to_vec()));
    obj.insert("col_modes".into(), Value::from(t.col_modes().to_vec()));
    obj.insert("real".into(), Value::Array(t.data().iter().map(|z| num(z.re)).collect()));
    if !t.is_real() {
        obj.insert("imag".into(), Value::Array(t.data().iter().map(|z| num(z.im)).collect()));
    }
    Value::Object(obj)
}

pub fn tensor_to_string(t: &Tensor) -> String {
    to_pretty(&tensor_to_json(t))
}

pub fn write_tensor(path: &Path, t: &Tensor) -> Result<()> {
    fs::write(path, tensor_to_string(t)).map_err(|e| Error::Parse(format!("{}: {e}", path.display())))
}

pub fn to_pretty(v: &Value) -> String {
    let mut s = serde_json::to_string_pretty(v).expect("json values serialize");
    s.push('\n');
    s
}

pub fn float_map<'a, I: IntoIterator<Item = (&'a String, &'a f64)>>(items: I) -> Value {
    Value::Object(items.into_iter().map(|(k, &v)| (k.clone(), num(v))).collect())
}

/// `{name, residuals, tolerance, passed, marginal, info}`.
pub fn check_report_json(r: &CheckReport) -> Value {
    let mut obj = Map::new();
    obj.insert("name".into(), Value::from(r.name.clone()));
    obj.insert("residuals".into(), float_map(&r.residuals));
    obj.insert("tolerance".into(), num(r.tolerance));
    obj.insert("passed".into(), Value::Bool(r.passed));
    obj.insert("marginal".into(), Value::Bool(r.marginal));
    obj.insert("info".into(), float_map(&r.info));
    Value::Object(obj)
}
