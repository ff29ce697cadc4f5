//! JSON input documents describing a toric manifold.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::fan::Fan;

/// On-disk schema. Cone and ray indices are 1-based here.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct InputDocument {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub name: Option<String>,
    pub dimension: usize,
    pub rays: Vec<Vec<i64>>,
    pub max_cones: Vec<Vec<usize>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub curve_class_basis: Option<Vec<Vec<i64>>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub names: Option<Vec<String>>,
    /// Extra variable names for rendering, as exponent vectors in the basis variables.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub display_monomials: Option<BTreeMap<String, Vec<u32>>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub default_cone: Option<Vec<usize>>,
}

/// A parsed document with its fan. Indices are 0-based from here on.
#[derive(Debug, Clone)]
pub struct ToricData {
    pub document: InputDocument,
    pub fan: Fan,
    pub basis: Option<Vec<Vec<i64>>>,
    pub display_monomials: BTreeMap<String, Vec<u32>>,
    /// Index into `fan.cones()`.
    pub default_cone: Option<usize>,
}

impl ToricData {
    pub fn name(&self) -> &str {
        self.document.name.as_deref().unwrap_or("unnamed")
    }

    /// Ray names, defaulting to `D1..Dm`.
    pub fn ray_names(&self) -> Vec<String> {
        match &self.document.names {
            Some(n) => n.clone(),
            None => (1..=self.fan.num_rays()).map(|i| format!("D{i}")).collect(),
        }
    }
}

fn input_err(msg: impl Into<String>) -> Error {
    Error::Input(msg.into())
}

/// Parse and shape-check a document; fan invariants are not checked.
pub fn parse_document(text: &str) -> Result<ToricData> {
    let doc: InputDocument = serde_json::from_str(text).map_err(|e| input_err(format!("schema: {e}")))?;
    from_document(doc)
}

/// Parse a document and require a smooth complete fan.
pub fn parse_input(text: &str) -> Result<ToricData> {
    let data = parse_document(text)?;
    let report = data.fan.validate();
    if !report.is_ok() {
        return Err(Error::InvalidFan(report.to_string()));
    }
    Ok(data)
}

pub fn from_document(doc: InputDocument) -> Result<ToricData> {
    let n = doc.dimension;
    if n == 0 {
        return Err(input_err("field `dimension`: must be positive"));
    }
    let m = doc.rays.len();
    for (i, r) in doc.rays.iter().enumerate() {
        if r.len() != n {
            return Err(input_err(format!(
                "field `rays[{i}]`: expected {n} entries, found {}",
                r.len()
            )));
        }
    }
    let one_based = |field: &str, idx: &[usize]| -> Result<Vec<usize>> {
        idx.iter()
            .map(|&k| {
                if k == 0 || k > m {
                    Err(input_err(format!("field `{field}`: ray index {k} outside 1..={m}")))
                } else {
                    Ok(k - 1)
                }
            })
            .collect()
    };
    let mut cones = Vec::with_capacity(doc.max_cones.len());
    for (c, cone) in doc.max_cones.iter().enumerate() {
        let field = format!("max_cones[{c}]");
        if cone.len() != n {
            return Err(input_err(format!(
                "field `{field}`: expected {n} rays, found {}",
                cone.len()
            )));
        }
        cones.push(one_based(&field, cone)?);
    }
    if let Some(basis) = &doc.curve_class_basis {
        for (a, b) in basis.iter().enumerate() {
            if b.len() != m {
                return Err(input_err(format!(
                    "field `curve_class_basis[{a}]`: expected {m} entries, found {}",
                    b.len()
                )));
            }
        }
    }
    if let Some(names) = &doc.names {
        if names.len() != m {
            return Err(input_err(format!(
                "field `names`: expected {m} names, found {}",
                names.len()
            )));
        }
    }
    let fan = Fan::new(n, doc.rays.clone(), cones);
    let default_cone = match &doc.default_cone {
        None => None,
        Some(c) => {
            let rays = one_based("default_cone", c)?;
            Some(
                fan.find_cone(&rays)
                    .ok_or_else(|| input_err(format!("field `default_cone`: {c:?} is not a maximal cone")))?,
            )
        }
    };
    let display_monomials = doc.display_monomials.clone().unwrap_or_default();
    if let Some(basis) = &doc.curve_class_basis {
        let l = basis.len();
        for (name, e) in &display_monomials {
            if e.len() != l {
                return Err(input_err(format!(
                    "field `display_monomials.{name}`: expected {l} exponents, found {}",
                    e.len()
                )));
            }
        }
    }
    Ok(ToricData {
        basis: doc.curve_class_basis.clone(),
        document: doc,
        fan,
        display_monomials,
        default_cone,
    })
}

/// Pretty JSON for a document.
pub fn render(doc: &InputDocument) -> String {
    serde_json::to_string_pretty(doc).expect("document serializes")
}
