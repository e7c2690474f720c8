//! JSON reports.

use deloop_core::algebra::Algebra;
use deloop_core::homology::{self, Bound, CertifiedBound, ChainReport, Value};
use deloop_core::modrep::Module;
use serde::Serialize;
use sha2::{Digest, Sha256};

use crate::format::AlgebraFile;

pub const SCHEMA: &str = "deloop-report/1";

/// Either end of an interval; `"inf"` when unbounded.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(untagged)]
pub enum End {
    Finite(usize),
    Infinite(&'static str),
}

impl From<Value> for End {
    fn from(v: Value) -> End {
        match v {
            Value::Finite(n) => End::Finite(n),
            Value::Infinite => End::Infinite("inf"),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Verdict {
    pub kind: &'static str,
    pub lo: End,
    pub hi: End,
    pub text: String,
    pub witness: String,
}

impl From<&CertifiedBound> for Verdict {
    fn from(b: &CertifiedBound) -> Verdict {
        let kind = match b.kind {
            Bound::Exact(_) => "exact",
            Bound::AtLeast(_) => "at_least",
            Bound::AtMost(_) => "at_most",
            Bound::Interval(..) => "interval",
            Bound::Infinite => "infinite",
        };
        Verdict { kind, lo: b.lower().into(), hi: b.upper().into(), text: b.to_string(), witness: b.witness.clone() }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct KVerdict {
    pub k: usize,
    pub verdict: Verdict,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct AlgebraInfo {
    pub fingerprint: String,
    pub characteristic: u32,
    pub dim: usize,
    pub vertices: Vec<String>,
    pub cartan: Vec<Vec<usize>>,
}

/// SHA-256 of the printed structure constants.
pub fn fingerprint(alg: &Algebra) -> String {
    let text = AlgebraFile::from_algebra(alg).to_text();
    Sha256::digest(text.as_bytes()).iter().map(|b| format!("{b:02x}")).collect()
}

pub fn algebra_info(alg: &Algebra) -> AlgebraInfo {
    AlgebraInfo {
        fingerprint: fingerprint(alg),
        characteristic: alg.field().modulus(),
        dim: alg.dim(),
        vertices: alg.vertex_names().to_vec(),
        cartan: alg.cartan_matrix(),
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ModuleReport {
    pub name: String,
    pub dims: Vec<usize>,
    pub pd: Verdict,
    pub id: Verdict,
    pub grade: Verdict,
    pub dell: Verdict,
    pub k_dell: Vec<KVerdict>,
    pub ddell_upper: Verdict,
}

pub fn module_report(name: &str, m: &Module, cutoff: usize, kmax: usize, seed: u64) -> ModuleReport {
    ModuleReport {
        name: name.to_string(),
        dims: m.dims().to_vec(),
        pd: (&homology::pd(m, cutoff, seed)).into(),
        id: (&homology::injective_dim(m, cutoff, seed)).into(),
        grade: (&homology::grade(m, cutoff)).into(),
        dell: (&homology::dell(m, cutoff, seed)).into(),
        k_dell: (2..=kmax).map(|k| KVerdict { k, verdict: (&homology::k_dell(m, k, cutoff, seed)).into() }).collect(),
        ddell_upper: (&homology::ddell_upper(m, cutoff, seed, &[])).into(),
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ChainVerdicts {
    pub gldim: Verdict,
    pub findim_op: Verdict,
    pub ddell: Verdict,
    pub dell: Verdict,
    pub k_dell: Vec<KVerdict>,
    pub violations: Vec<String>,
    pub ok: bool,
}

impl From<&ChainReport> for ChainVerdicts {
    fn from(r: &ChainReport) -> ChainVerdicts {
        ChainVerdicts {
            gldim: (&r.gldim).into(),
            findim_op: (&r.findim_op).into(),
            ddell: (&r.ddell).into(),
            dell: (&r.dell).into(),
            k_dell: r.k_dell.iter().map(|(k, b)| KVerdict { k: *k, verdict: b.into() }).collect(),
            violations: r.violations.clone(),
            ok: r.ok(),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct InvariantsReport {
    pub schema: &'static str,
    pub version: &'static str,
    pub algebra: AlgebraInfo,
    pub seed: u64,
    pub cutoff: usize,
    pub k: usize,
    pub modules: Vec<ModuleReport>,
    pub chain: ChainVerdicts,
}

impl InvariantsReport {
    pub fn new(alg: &Algebra, modules: &[(String, Module)], cutoff: usize, kmax: usize, seed: u64) -> Self {
        InvariantsReport {
            schema: SCHEMA,
            version: env!("CARGO_PKG_VERSION"),
            algebra: algebra_info(alg),
            seed,
            cutoff,
            k: kmax,
            modules: modules.iter().map(|(n, m)| module_report(n, m, cutoff, kmax, seed)).collect(),
            chain: (&homology::chain_report(alg, cutoff, kmax, seed)).into(),
        }
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("plain data serializes")
    }

    pub fn to_text(&self) -> String {
        let mut out = String::new();
        let row = |out: &mut String, name: &str, v: &Verdict| {
            out.push_str(&format!("  {name:<12} {:<8} {}\n", v.text, v.witness));
        };
        for m in &self.modules {
            out.push_str(&format!("module {} dims {:?}\n", m.name, m.dims));
            row(&mut out, "pd", &m.pd);
            row(&mut out, "id", &m.id);
            row(&mut out, "grade", &m.grade);
            row(&mut out, "dell", &m.dell);
            for kv in &m.k_dell {
                row(&mut out, &format!("{}-dell", kv.k), &kv.verdict);
            }
            row(&mut out, "ddell <=", &m.ddell_upper);
        }
        let c = &self.chain;
        out.push_str("algebra\n");
        row(&mut out, "gldim", &c.gldim);
        row(&mut out, "Findim^op", &c.findim_op);
        row(&mut out, "ddell", &c.ddell);
        row(&mut out, "dell", &c.dell);
        for kv in &c.k_dell {
            row(&mut out, &format!("{}-dell", kv.k), &kv.verdict);
        }
        if c.ok {
            out.push_str("chain: consistent\n");
        } else {
            for v in &c.violations {
                out.push_str(&format!("chain violation: {v}\n"));
            }
        }
        out
    }
}
