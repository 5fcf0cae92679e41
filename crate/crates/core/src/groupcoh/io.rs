use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::fp_linalg::FpMatrix;

use super::group::FiniteGroup;
use super::module::FpModule;

/// `{"order": n, "mult": [[...]], "generators": [...], "module": {"p":, "dim":, "action": {...}}}`
/// with `action` keyed by the element index of each generator.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct GroupModuleSpec {
    pub order: usize,
    pub mult: Vec<Vec<usize>>,
    pub generators: Vec<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub labels: Option<Vec<String>>,
    pub module: ModuleSpec,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct ModuleSpec {
    pub p: u32,
    pub dim: usize,
    pub action: BTreeMap<String, Vec<Vec<i64>>>,
}

impl GroupModuleSpec {
    pub fn build(&self) -> Result<(FiniteGroup, FpModule)> {
        if self.mult.len() != self.order {
            return Err(Error::InvalidInput("mult table size differs from order".into()));
        }
        if !crate::util::is_prime(self.module.p as u64) {
            return Err(Error::InvalidInput(format!("{} is not prime", self.module.p)));
        }
        let g = FiniteGroup::new(self.mult.clone(), self.generators.clone(), self.labels.clone())?;
        let (p, dim) = (self.module.p, self.module.dim);
        let mats = self
            .generators
            .iter()
            .map(|s| match self.module.action.get(&s.to_string()) {
                Some(rows) => Ok(FpMatrix::from_rows(p, rows)),
                None => Err(Error::InvalidInput(format!("no action given for generator {s}"))),
            })
            .collect::<Result<Vec<_>>>()?;
        let m = FpModule::from_generators(&g, p, dim, &mats)?;
        Ok((g, m))
    }
}

pub fn load_group_module(json: &str) -> Result<(FiniteGroup, FpModule)> {
    let spec: GroupModuleSpec =
        serde_json::from_str(json).map_err(|e| Error::InvalidInput(format!("group description: {e}")))?;
    spec.build()
}
