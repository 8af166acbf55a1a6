//! JSON context files.
//!
//! ```json
//! {
//!   "independent": ["t", "x"],
//!   "weights": [2, 1],
//!   "dependent": ["u"],
//!   "parameters": ["alpha"],
//!   "functions": [{"name": "f", "arity": 1}],
//!   "derivCap": 8
//! }
//! ```

use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::jet::JetContext;

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct FunctionDecl {
    pub name: String,
    #[serde(default = "one")]
    pub arity: u32,
}

fn one() -> u32 {
    1
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase", deny_unknown_fields)]
pub struct ContextConfig {
    pub independent: Vec<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub weights: Option<Vec<u32>>,
    pub dependent: Vec<String>,
    #[serde(default)]
    pub parameters: Vec<String>,
    #[serde(default)]
    pub functions: Vec<FunctionDecl>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub deriv_cap: Option<u32>,
}

impl ContextConfig {
    pub fn from_json(text: &str) -> Result<Self> {
        serde_json::from_str(text).map_err(|e| Error::Config(e.to_string()))
    }

    pub fn from_path(path: impl AsRef<Path>) -> Result<Self> {
        let path = path.as_ref();
        let text = std::fs::read_to_string(path).map_err(|e| Error::Config(format!("{}: {e}", path.display())))?;
        Self::from_json(&text)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("serializable")
    }

    pub fn build(&self) -> Result<JetContext> {
        fn strs(v: &[String]) -> Vec<&str> {
            v.iter().map(String::as_str).collect()
        }
        for f in &self.functions {
            if f.arity != 1 {
                return Err(Error::Config(format!(
                    "function `{}` has arity {}; only unary functions are supported",
                    f.name, f.arity
                )));
            }
        }
        let names: Vec<String> = self.functions.iter().map(|f| f.name.clone()).collect();
        let mut ctx = JetContext::new(&strs(&self.independent), &strs(&self.dependent))?
            .with_parameters(&strs(&self.parameters))?
            .with_functions(&strs(&names))?;
        if let Some(w) = &self.weights {
            ctx = ctx.with_weights(w)?;
        }
        if let Some(cap) = self.deriv_cap {
            ctx = ctx.with_deriv_cap(cap)?;
        }
        Ok(ctx)
    }
}

impl From<&JetContext> for ContextConfig {
    fn from(ctx: &JetContext) -> Self {
        ContextConfig {
            independent: ctx.independent().to_vec(),
            weights: Some(ctx.weights().to_vec()),
            dependent: ctx.dependent().to_vec(),
            parameters: ctx.parameters().to_vec(),
            functions: ctx
                .functions()
                .iter()
                .map(|n| FunctionDecl { name: n.clone(), arity: 1 })
                .collect(),
            deriv_cap: Some(ctx.deriv_cap()),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn reads_a_full_document() {
        let c = ContextConfig::from_json(
            r#"{"independent": ["t", "x"], "weights": [2, 1], "dependent": ["u"],
                "parameters": ["alpha"], "functions": [{"name": "f", "arity": 1}], "derivCap": 6}"#,
        )
        .unwrap();
        let ctx = c.build().unwrap();
        assert_eq!(ctx.weights(), &[2, 1]);
        assert_eq!(ctx.deriv_cap(), 6);
        assert!(ctx.is_function("f"));
        assert_eq!(ContextConfig::from_json(&ContextConfig::from(&ctx).to_json()).unwrap().build().unwrap().weights(), &[2, 1]);
    }

    #[test]
    fn defaults_and_errors() {
        let ctx = ContextConfig::from_json(r#"{"independent": ["x"], "dependent": ["u"]}"#)
            .unwrap()
            .build()
            .unwrap();
        assert_eq!(ctx.weights(), &[1]);
        assert!(ContextConfig::from_json(r#"{"independent": ["x"]}"#).is_err());
        assert!(ContextConfig::from_json(r#"{"independent": ["x"], "dependent": ["u"], "extra": 1}"#).is_err());
        let binary = r#"{"independent": ["x"], "dependent": ["u"], "functions": [{"name": "g", "arity": 2}]}"#;
        assert!(ContextConfig::from_json(binary).unwrap().build().is_err());
        let clash = r#"{"independent": ["x"], "dependent": ["x"]}"#;
        assert!(ContextConfig::from_json(clash).unwrap().build().is_err());
    }
}
