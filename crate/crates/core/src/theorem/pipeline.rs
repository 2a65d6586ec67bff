use serde::Serialize;
use serde_json::{json, Value};

use super::{check_hypotheses, cluster_json, report_witness, Instance};
use crate::charcluster::{cluster, cluster_eq, cluster_subset, common_field, fp_span, CharacterCluster};
use crate::error::{Error, Result};
use crate::formations::{is_hypercentral, is_hypercentral_nilpotent_fast, Formation, HypercentralReport};
use crate::gf::DEFAULT_MAX_EXTENSION_DEGREE;
use crate::liealg::Subalgebra;
use crate::linalg::{Matrix, Subspace};
use crate::repmod::{LModule, ModuleMap, DEFAULT_MAX_MODULE_DIM};

/// `X = ⊕_{r=1}^{k(p-1)} V^{⊗r}` with `k = |cl(V)|`, and how its cluster
/// compares with `F_p cl(V)`.
#[derive(Clone, Debug)]
pub struct TensorPowerSum {
    pub module: LModule,
    pub k: usize,
    pub top: usize,
    pub summand_dims: Vec<usize>,
    pub cluster_v: CharacterCluster,
    pub cluster_x: CharacterCluster,
    pub span: CharacterCluster,
    pub matches_span: bool,
    /// `cl(X)` misses only the zero character, which happens exactly when
    /// `k = 1` and the single character is nonzero.
    pub zero_discrepancy: bool,
}

fn union(a: &CharacterCluster, b: &CharacterCluster) -> Result<CharacterCluster> {
    let (a, b) = common_field(a, b, DEFAULT_MAX_EXTENSION_DEGREE)?;
    let mut out = CharacterCluster::from_characters(a.scalars().clone(), a.values().iter().chain(b.values()).cloned());
    out.factor_dims = a.factor_dims.iter().chain(&b.factor_dims).copied().collect();
    out.factor_dims.sort_unstable();
    Ok(out)
}

/// The predicted dimension of `X` before building it.
pub fn tensor_power_sum_dim(d: usize, top: usize) -> usize {
    let mut total = 0usize;
    let mut pow = 1usize;
    for _ in 0..top {
        pow = pow.saturating_mul(d);
        total = total.saturating_add(pow);
    }
    total
}

pub fn tensor_power_sum(v: &LModule, seed: u64) -> Result<TensorPowerSum> {
    tensor_power_sum_capped(v, seed, DEFAULT_MAX_MODULE_DIM)
}

pub fn tensor_power_sum_capped(v: &LModule, seed: u64, cap: usize) -> Result<TensorPowerSum> {
    let p = v.field().characteristic() as usize;
    let cluster_v = cluster(v, seed)?;
    let k = cluster_v.len();
    let top = k * (p - 1);
    let total = tensor_power_sum_dim(v.dim(), top);
    if total > cap {
        return Err(Error::DimensionCap { requested: total, cap });
    }
    let mut power = v.clone();
    let mut module = v.clone();
    let mut cluster_x = cluster(v, seed)?;
    let mut summand_dims = vec![v.dim()];
    for _ in 1..top {
        power = power.tensor(v)?;
        module = module.direct_sum(&power)?;
        // composition factors of a direct sum are those of the summands
        cluster_x = union(&cluster_x, &cluster(&power, seed)?)?;
        summand_dims.push(power.dim());
    }
    let span = fp_span(&cluster_v);
    let cap_deg = DEFAULT_MAX_EXTENSION_DEGREE;
    let matches_span = cluster_eq(&cluster_x, &span, cap_deg)?;
    let zero_discrepancy = !matches_span
        && !cluster_x.contains_zero()
        && cluster_subset(&cluster_x, &span, cap_deg)?
        && cluster_x.len() + 1 == span.len();
    Ok(TensorPowerSum { module, k, top, summand_dims, cluster_v, cluster_x, span, matches_span, zero_discrepancy })
}

/// `H ⊆ Hom(v, w)`: the maps killed by every `ρ(x)^p − ρ(x^[p])`. Returns the
/// Hom module alongside.
pub fn char_zero_hom_submodule(v: &LModule, w: &LModule) -> Result<(LModule, Subspace)> {
    let hom = v.hom_module(w)?;
    let f = v.field().clone();
    let (dv, dw) = (v.dim(), w.dim());
    // on Hom the defect is f ↦ D_W f − f D_V, since left and right
    // multiplications commute
    let iv = Matrix::identity(&f, dv);
    let iw = Matrix::identity(&f, dw);
    let mut blocks = Vec::with_capacity(v.actions().len());
    for i in 0..v.actions().len() {
        let dvi = v.semilinear_defect(i)?;
        let dwi = w.semilinear_defect(i)?;
        blocks.push(dwi.kron(&iv).sub(&iw.kron(&dvi.transpose())));
    }
    let h = if blocks.is_empty() {
        Subspace::full(&f, dv * dw)
    } else {
        let refs: Vec<&Matrix> = blocks.iter().collect();
        Matrix::vstack(&f, dv * dw, &refs).kernel()
    };
    if !hom.is_submodule(&h) {
        return Err(Error::Internal("character-zero maps are not a submodule".into()));
    }
    if !h.is_zero() && !hom.restrict_to(&h)?.is_restricted_module() {
        return Err(Error::Internal("character-zero maps do not form a restricted module".into()));
    }
    Ok((hom, h))
}

/// `v ⊗ H → w`, `x ⊗ f ↦ f(x)`, with `H` in the echelon basis of `h`.
pub fn evaluation_map(v: &LModule, hom: &LModule, h: &Subspace, w: &LModule) -> Result<ModuleMap> {
    if !hom.is_submodule(h) {
        return Err(Error::NotInvariant("H is not a submodule of Hom(V, W)".into()));
    }
    let f = v.field().clone();
    let (dv, dw, t) = (v.dim(), w.dim(), h.dim());
    let hm = hom.restrict_to(h)?;
    let source = v.tensor(&hm)?;
    let maps = h.vectors();
    let mut m = Matrix::zeros(&f, dw, dv * t);
    for (j, fv) in maps.iter().enumerate() {
        for a in 0..dv {
            for b in 0..dw {
                m.set(b, a * t + j, fv[b * dv + a]);
            }
        }
    }
    ModuleMap::new(source, w.clone(), m)
}

#[derive(Clone, Debug, Serialize)]
pub struct StepReport {
    pub step: u8,
    pub name: &'static str,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub factor: Option<usize>,
    pub passed: bool,
    pub details: Value,
}

#[derive(Clone, Debug, Serialize)]
pub struct PipelineReport {
    pub completed: bool,
    pub x_dim: usize,
    pub k: usize,
    pub zero_discrepancy: bool,
    pub trivial_summand_added: bool,
    pub factor_dims: Vec<usize>,
    pub steps: Vec<StepReport>,
}

impl PipelineReport {
    pub fn failed_steps(&self) -> Vec<&StepReport> {
        self.steps.iter().filter(|s| !s.passed).collect()
    }
}

fn s_hypercentral(formation: &dyn Formation, m: &LModule, s: &Subalgebra, seed: u64) -> Result<HypercentralReport> {
    let r = m.restrict_to_subalgebra(s)?;
    Ok(if formation.name() == "nilpotent" {
        is_hypercentral_nilpotent_fast(&r, seed)
    } else {
        is_hypercentral(&r, formation, seed)
    })
}

/// Replays the proof on a concrete instance whose hypotheses all hold.
pub fn proof_pipeline(inst: &Instance) -> Result<PipelineReport> {
    let failing: Vec<&'static str> = check_hypotheses(inst)?.iter().filter(|c| !c.holds).map(|c| c.name).collect();
    if !failing.is_empty() {
        return Err(Error::Precondition(format!("hypotheses fail: {}", failing.join(", "))));
    }
    let seed = inst.seed;
    let s = &inst.subalgebra;
    let formation = inst.formation();
    let formation = formation.as_ref();
    let cap = DEFAULT_MAX_EXTENSION_DEGREE;
    let mut steps = Vec::new();

    // step 1: X and its cluster
    let tps = tensor_power_sum(&inst.v, seed)?;
    let mut x = tps.module.clone();
    let mut cluster_x = tps.cluster_x.clone();
    let added = tps.zero_discrepancy;
    if added {
        // the empty tensor power contributes the zero character
        x = LModule::trivial(inst.algebra.clone(), 1).direct_sum(&x)?;
        cluster_x = union(&cluster_x, &cluster(&LModule::trivial(inst.algebra.clone(), 1), seed)?)?;
    }
    let span_ok = cluster_eq(&cluster_x, &tps.span, cap)?;
    let pattern_ok = !tps.zero_discrepancy || (tps.k == 1 && !tps.cluster_v.contains_zero());
    let xr = s_hypercentral(formation, &x, s, seed)?;
    steps.push(StepReport {
        step: 1,
        name: "tensor_power_sum",
        factor: None,
        passed: span_ok && pattern_ok && xr.is_hypercentral,
        details: json!({
            "k": tps.k,
            "top_power": tps.top,
            "summand_dims": tps.summand_dims,
            "cl_v": cluster_json(&tps.cluster_v),
            "cl_x": cluster_json(&tps.cluster_x),
            "fp_span": cluster_json(&tps.span),
            "zero_discrepancy": tps.zero_discrepancy,
            "discrepancy_in_expected_pattern": pattern_ok,
            "x_hypercentral": report_witness(&xr),
        }),
    });

    // steps 2-5 for each composition factor of W
    let cs = inst.w.composition_series(seed);
    let mut all_central = true;
    for (idx, wf) in cs.factors.iter().enumerate() {
        let cw = cluster(wf, seed)?;
        let inside = cluster_subset(&cw, &cluster_x, cap)?;
        steps.push(StepReport {
            step: 2,
            name: "factor_cluster_in_x",
            factor: Some(idx),
            passed: inside,
            details: json!({ "dim": wf.dim(), "cl_factor": cluster_json(&cw) }),
        });

        let (hom, h) = char_zero_hom_submodule(&x, wf)?;
        let h_ok = !h.is_zero();
        let hr = if h_ok { Some(s_hypercentral(formation, &hom.restrict_to(&h)?, s, seed)?) } else { None };
        let h_central = hr.as_ref().is_some_and(|r| r.is_hypercentral);
        steps.push(StepReport {
            step: 3,
            name: "char_zero_hom",
            factor: Some(idx),
            passed: h_ok && h_central,
            details: json!({
                "hom_dim": hom.dim(),
                "h_dim": h.dim(),
                "h_restricted": h_ok,
                "h_hypercentral": hr.as_ref().map(report_witness),
            }),
        });
        if !h_ok {
            all_central = false;
            continue;
        }

        // a minimal submodule of H already maps onto the irreducible factor
        let hmod = hom.restrict_to(&h)?;
        let h0 = h.lift_subspace(&hmod.minimal_submodule(seed));
        let eval = evaluation_map(&x, &hom, &h0, wf)?;
        let image = wf.submodule(&eval.image().vectors());
        steps.push(StepReport {
            step: 4,
            name: "evaluation_surjective",
            factor: Some(idx),
            passed: image.is_full(),
            details: json!({ "h0_dim": h0.dim(), "image_dim": image.dim(), "factor_dim": wf.dim() }),
        });

        let xh = x.tensor(&hom.restrict_to(&h0)?)?;
        let xhr = s_hypercentral(formation, &xh, s, seed)?;
        let wfr = s_hypercentral(formation, wf, s, seed)?;
        let central = xhr.is_hypercentral && wfr.is_hypercentral;
        all_central &= central;
        steps.push(StepReport {
            step: 5,
            name: "factor_hypercentral",
            factor: Some(idx),
            passed: central && image.is_full(),
            details: json!({
                "tensor_dim": xh.dim(),
                "tensor_hypercentral": report_witness(&xhr),
                "factor_hypercentral": report_witness(&wfr),
            }),
        });
    }

    // step 6: pasting the factors back together
    let wr = s_hypercentral(formation, &inst.w, s, seed)?;
    steps.push(StepReport {
        step: 6,
        name: "reassemble",
        factor: None,
        passed: all_central && wr.is_hypercentral,
        details: json!({
            "factors": cs.factors.len(),
            "all_factors_hypercentral": all_central,
            "w_hypercentral": report_witness(&wr),
        }),
    });

    Ok(PipelineReport {
        completed: steps.iter().all(|s| s.passed),
        x_dim: x.dim(),
        k: tps.k,
        zero_discrepancy: tps.zero_discrepancy,
        trivial_summand_added: added,
        factor_dims: cs.factor_dims(),
        steps,
    })
}

#[cfg(test)]
mod tests {
    use std::sync::Arc;

    use super::*;
    use crate::gf::FieldCtx;
    use crate::liealg::{LieAlgebra, RestrictedLieAlgebra};
    use crate::theorem::tests::worked;

    fn line(p: u64) -> Arc<RestrictedLieAlgebra> {
        let f = FieldCtx::prime(p).unwrap();
        Arc::new(RestrictedLieAlgebra::new(LieAlgebra::abelian(&f, 1), Matrix::zeros(&f, 1, 1)).unwrap())
    }

    #[test]
    fn tensor_power_sum_examples() {
        let l = line(3);
        let t = tensor_power_sum(&LModule::trivial(l.clone(), 1), 0).unwrap();
        assert_eq!(t.summand_dims, vec![1, 1]);
        assert!(t.cluster_x.is_zero_cluster() && t.matches_span);

        let one = LModule::new(l.clone(), vec![Matrix::from_ints(l.field(), &[vec![1]])]).unwrap();
        let t = tensor_power_sum(&one, 0).unwrap();
        assert_eq!(t.cluster_x.values(), &[vec![1], vec![2]]);
        assert!(t.zero_discrepancy && !t.matches_span);

        let l2 = line(2);
        let d = LModule::new(l2.clone(), vec![Matrix::from_ints(l2.field(), &[vec![0, 0], vec![0, 1]])]).unwrap();
        let t = tensor_power_sum(&d, 0).unwrap();
        assert_eq!(t.summand_dims, vec![2, 4]);
        assert!(t.matches_span);
    }

    #[test]
    fn char_zero_hom_examples() {
        let l = line(3);
        let t = LModule::trivial(l.clone(), 2);
        assert!(char_zero_hom_submodule(&t, &t).unwrap().1.is_full());
        let m = |a: i64| LModule::new(l.clone(), vec![Matrix::from_ints(l.field(), &[vec![a]])]).unwrap();
        assert!(char_zero_hom_submodule(&m(1), &m(1)).unwrap().1.is_full());
        assert!(char_zero_hom_submodule(&m(1), &m(2)).unwrap().1.is_zero());
    }

    #[test]
    fn hom_defect_shortcut_matches_definition() {
        let f = FieldCtx::prime(3).unwrap();
        let alg = LieAlgebra::from_brackets(&f, 2, &[(0, 1, vec![0, 1])]).unwrap();
        let l = Arc::new(RestrictedLieAlgebra::verified(alg, Matrix::from_ints(&f, &[vec![1, 0], vec![0, 0]])).unwrap());
        let ad = LModule::adjoint(&l);
        let v = ad.direct_sum(&LModule::trivial(l.clone(), 1)).unwrap();
        let (hom, h) = char_zero_hom_submodule(&v, &ad).unwrap();
        let blocks: Vec<Matrix> = (0..2).map(|i| hom.semilinear_defect(i).unwrap()).collect();
        let direct = Matrix::vstack(&f, hom.dim(), &[&blocks[0], &blocks[1]]).kernel();
        assert_eq!(h, direct);
    }

    #[test]
    fn evaluation_examples() {
        let l = line(5);
        let f = l.field().clone();
        let v = LModule::new(l.clone(), vec![Matrix::from_ints(&f, &[vec![0, 1], vec![0, 0]])]).unwrap();
        let hom = v.hom_module(&v).unwrap();
        let zero = Subspace::zero(&f, 4);
        assert!(evaluation_map(&v, &hom, &zero, &v).unwrap().image().is_zero());
        let id = hom.submodule(&[vec![1, 0, 0, 1]]);
        assert!(evaluation_map(&v, &hom, &id, &v).unwrap().is_surjective());
    }

    #[test]
    fn worked_pipeline_passes() {
        let r = proof_pipeline(&worked(0, 2)).unwrap();
        assert!(r.completed, "{:?}", r.failed_steps());
        assert!(r.zero_discrepancy && r.trivial_summand_added);
        assert!(matches!(proof_pipeline(&worked(1, 0)), Err(Error::Precondition(_))));
    }
}
