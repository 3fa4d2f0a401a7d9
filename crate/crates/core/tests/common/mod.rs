#![allow(dead_code)]

use std::sync::Arc;

use kanbench_core::{catalog, sample, FinCat, Presheaf, Workspace};
use rand::rngs::StdRng;

/// The three bundled bases, each with a sampler of presheaves on it.
pub struct Base {
    pub name: &'static str,
    pub base: Arc<FinCat>,
}

impl Base {
    pub fn sample(&self, ws: &Workspace, rng: &mut StdRng) -> Presheaf {
        match self.name {
            "cat" => sample::category_presheaf(ws, &self.base, 3, rng).unwrap(),
            _ => sample::free_presheaf(ws, &self.base, 3, rng).unwrap(),
        }
    }
}

pub fn bases(ws: &Workspace) -> Vec<Base> {
    vec![
        Base { name: "set", base: catalog::set_model(ws).base },
        Base { name: "setset", base: catalog::setset_base(ws) },
        Base { name: "cat", base: catalog::cat_base(ws) },
    ]
}
