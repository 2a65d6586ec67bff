//! Hypotheses, verdicts and proof replay for the transfer of hypercentrality
//! from `V` to `W` along character clusters.

mod generate;
mod pipeline;

pub use generate::{
    campaign, instance_seed, random_instance, random_instance_budget, CampaignConfig, CampaignSummary, InstanceOutcome,
    PrimeSummary, DEFAULT_MAX_DIM_L, DEFAULT_MAX_DIM_V, DEFAULT_MAX_DIM_X,
};
pub use pipeline::{
    char_zero_hom_submodule, evaluation_map, proof_pipeline, tensor_power_sum, tensor_power_sum_capped,
    tensor_power_sum_dim, PipelineReport, StepReport,
    TensorPowerSum,
};

use std::sync::Arc;

use serde::Serialize;
use serde_json::{json, Value};

use crate::charcluster::{cluster, cluster_difference, cluster_subset, fp_span, CharacterCluster};
use crate::error::{Error, Result};
use crate::formations::{formation_by_name, is_hypercentral, Formation, HypercentralReport};
use crate::gf::DEFAULT_MAX_EXTENSION_DEGREE;
use crate::liealg::{RestrictedLieAlgebra, Subalgebra};
use crate::repmod::LModule;
use crate::schema::{
    parse_subspace, subspace_record, vector_record, AlgebraRecord, InstanceRecord, ModuleRecord,
};

/// Everything the statement quantifies over.
#[derive(Clone, Debug)]
pub struct Instance {
    pub algebra: Arc<RestrictedLieAlgebra>,
    pub subalgebra: Subalgebra,
    pub v: LModule,
    pub w: LModule,
    pub formation: String,
    pub seed: u64,
}

impl Instance {
    /// Verifies the algebra, p-map, subalgebra and both modules.
    pub fn new(
        algebra: Arc<RestrictedLieAlgebra>,
        subalgebra: Subalgebra,
        v: LModule,
        w: LModule,
        formation: &str,
        seed: u64,
    ) -> Result<Self> {
        let lie = algebra.algebra();
        if let Some(x) = lie.verify_lie().first() {
            return Err(Error::InvalidAlgebra(format!("{} fails at {:?}", x.axiom, x.indices)));
        }
        if let Some(x) = algebra.verify_pmap().first() {
            return Err(Error::InvalidAlgebra(format!("{} fails at {:?}", x.axiom, x.indices)));
        }
        if !Arc::ptr_eq(subalgebra.parent(), &algebra) && **subalgebra.parent() != *algebra {
            return Err(Error::AlgebraMismatch);
        }
        for (name, m) in [("V", &v), ("W", &w)] {
            match m.restricted_algebra() {
                Some(l) if Arc::ptr_eq(l, &algebra) || **l == *algebra => {}
                _ => return Err(Error::AlgebraMismatch),
            }
            if let Some(x) = m.verify_module().first() {
                return Err(Error::InvalidModule(format!("{name} fails the bracket at {:?}", x.indices)));
            }
        }
        formation_by_name(formation)?;
        Ok(Instance { algebra, subalgebra, v, w, formation: formation.to_string(), seed })
    }

    pub fn from_record(rec: &InstanceRecord) -> Result<Self> {
        let l = Arc::new(rec.algebra.to_algebra()?);
        let space = parse_subspace(l.field(), &rec.subalgebra, l.dim())?;
        let s = Subalgebra::new(l.clone(), space)?;
        let v = rec.v.to_module(&l)?;
        let w = rec.w.to_module(&l)?;
        Instance::new(l, s, v, w, &rec.formation, rec.seed)
    }

    pub fn to_record(&self) -> InstanceRecord {
        InstanceRecord {
            algebra: AlgebraRecord::from_algebra(&self.algebra),
            subalgebra: subspace_record(self.subalgebra.space()),
            v: ModuleRecord::from_module(&self.v),
            w: ModuleRecord::from_module(&self.w),
            formation: self.formation.clone(),
            seed: self.seed,
        }
    }

    pub fn formation(&self) -> Box<dyn Formation> {
        formation_by_name(&self.formation).expect("checked on construction")
    }
}

/// One hypothesis or conclusion, with a witness explaining the outcome.
#[derive(Clone, Debug, Serialize)]
pub struct Check {
    pub name: &'static str,
    pub holds: bool,
    #[serde(skip_serializing_if = "Value::is_null")]
    pub witness: Value,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "UPPERCASE")]
pub enum Status {
    Vacuous,
    Confirmed,
    Violation,
}

#[derive(Clone, Debug, Serialize)]
pub struct Verdict {
    pub hypotheses: Vec<Check>,
    pub conclusion: Check,
    pub status: Status,
}

impl Verdict {
    pub fn hypothesis(&self, name: &str) -> Option<&Check> {
        self.hypotheses.iter().find(|c| c.name == name)
    }
}

pub(crate) fn report_witness(r: &HypercentralReport) -> Value {
    let series: Vec<usize> = r.series.iter().map(|s| s.dim()).collect();
    match &r.obstruction {
        None => json!({ "series_dims": series }),
        Some(o) => json!({
            "series_dims": series,
            "hypercentre_dim": r.hypercentre.dim(),
            "non_central_factor_dim": r.obstruction_dim,
            "non_central_submodule": subspace_record(o),
        }),
    }
}

pub(crate) fn cluster_json(c: &CharacterCluster) -> Value {
    serde_json::to_value(crate::schema::ClusterRecord::from_cluster(c)).expect("serializable")
}

/// The six hypotheses, each with a witness.
pub fn check_hypotheses(inst: &Instance) -> Result<Vec<Check>> {
    let l = &inst.algebra;
    let f = l.field();
    let s = &inst.subalgebra;
    let formation = inst.formation();
    let mut out = Vec::with_capacity(6);

    let bad = l.central_pmap_witnesses();
    out.push(Check {
        name: "centre_kill",
        holds: bad.is_empty(),
        witness: match bad.first() {
            None => Value::Null,
            Some(z) => json!({ "z": vector_record(f, z), "z_p": vector_record(f, &l.pmap(z)) }),
        },
    });

    let nonzero = s.dim() > 0;
    out.push(Check { name: "s_nonzero", holds: nonzero, witness: json!({ "dim": s.dim() }) });

    let member = formation.is_member(&s.as_lie_algebra());
    out.push(Check { name: "s_in_formation", holds: member, witness: json!({ "formation": formation.name() }) });

    let (subnormal, chain) = s.is_subnormal();
    out.push(Check {
        name: "subnormal",
        holds: subnormal,
        witness: json!({ "chain_dims": chain.iter().map(|c| c.dim()).collect::<Vec<_>>() }),
    });

    out.push(if nonzero {
        let r = is_hypercentral(&inst.v.restrict_to_subalgebra(s)?, formation.as_ref(), inst.seed);
        Check { name: "v_hypercentral", holds: r.is_hypercentral, witness: report_witness(&r) }
    } else {
        Check { name: "v_hypercentral", holds: false, witness: json!("S is zero") }
    });

    let cv = cluster(&inst.v, inst.seed)?;
    let cw = cluster(&inst.w, inst.seed)?;
    let span = fp_span(&cv);
    let cap = DEFAULT_MAX_EXTENSION_DEGREE;
    let inside = cluster_subset(&cw, &span, cap)?;
    let witness = if inside {
        json!({ "cl_v": cluster_json(&cv), "cl_w": cluster_json(&cw) })
    } else {
        let missing = cluster_difference(&cw, &span, cap)?;
        let c = &missing[0];
        json!({
            "cl_v": cluster_json(&cv),
            "cl_w": cluster_json(&cw),
            "offending_character": crate::schema::CharacterRecord::from_character(c),
        })
    };
    out.push(Check { name: "cluster_inclusion", holds: inside, witness });
    Ok(out)
}

/// Hypotheses plus whether `W` is hypercentral over `S`.
pub fn check_theorem_instance(inst: &Instance) -> Result<Verdict> {
    let hypotheses = check_hypotheses(inst)?;
    let conclusion = if inst.subalgebra.dim() == 0 {
        Check { name: "w_hypercentral", holds: false, witness: json!("S is zero") }
    } else {
        let formation = inst.formation();
        let r = is_hypercentral(&inst.w.restrict_to_subalgebra(&inst.subalgebra)?, formation.as_ref(), inst.seed);
        Check { name: "w_hypercentral", holds: r.is_hypercentral, witness: report_witness(&r) }
    };
    let status = if hypotheses.iter().any(|h| !h.holds) {
        Status::Vacuous
    } else if conclusion.holds {
        Status::Confirmed
    } else {
        Status::Violation
    };
    Ok(Verdict { hypotheses, conclusion, status })
}
