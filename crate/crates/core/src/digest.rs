//! Content digests of presheaf data, independent of the concrete element ids.
//!
//! Elements are relabeled by their rank within their set, so two structures
//! built by the same sequence of operations in different workspaces hash the
//! same.

use std::fmt::Write as _;

use sha2::{Digest, Sha256};

use crate::presheaf::{Presheaf, PsMorphism};

#[derive(Default)]
pub(crate) struct Hasher(Sha256);

impl Hasher {
    pub fn new(domain: &str) -> Hasher {
        let mut h = Hasher::default();
        h.bytes(domain.as_bytes());
        h
    }

    pub fn bytes(&mut self, b: &[u8]) {
        self.0.update((b.len() as u64).to_le_bytes());
        self.0.update(b);
    }

    pub fn num(&mut self, n: usize) {
        self.0.update((n as u64).to_le_bytes());
    }

    pub fn ranks(&mut self, rows: &[Vec<usize>]) {
        self.num(rows.len());
        for row in rows {
            self.num(row.len());
            for &r in row {
                self.num(r);
            }
        }
    }

    pub fn presheaf(&mut self, x: &Presheaf) {
        let d = x.dense();
        self.num(d.sets.len());
        for s in &d.sets {
            self.num(s.len());
        }
        self.ranks(&d.act);
    }

    pub fn morphism(&mut self, m: &PsMorphism) {
        self.presheaf(m.source());
        self.presheaf(m.target());
        self.ranks(&m.ranks());
    }

    pub fn finish(self) -> String {
        let out = self.0.finalize();
        let mut s = String::with_capacity(out.len() * 2);
        for b in out.iter() {
            write!(s, "{b:02x}").unwrap();
        }
        s
    }
}

pub fn presheaf_digest(x: &Presheaf) -> String {
    let mut h = Hasher::new("presheaf");
    h.presheaf(x);
    h.finish()
}

pub fn morphism_digest(m: &PsMorphism) -> String {
    let mut h = Hasher::new("morphism");
    h.morphism(m);
    h.finish()
}
