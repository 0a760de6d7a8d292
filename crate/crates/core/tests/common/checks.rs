//! Per-instance property checks. Each returns `Err` with a description of
//! the first counterexample.
#![allow(dead_code)]

use std::sync::Arc;

use fdes_core::oracle::{
    brute_decentralized_exists, brute_infimal_co, brute_supervisor_exists, brute_supremal_cn, crisp_reference,
    observable_by_definition, strongly_observable_by_definition, CrispQuery,
};
use fdes_core::{
    closed_loop_central, closed_loop_decentralized, infimal_co, inverse_project_meet, is_controllable, is_coobservable,
    is_normal, is_observable, is_strongly_observable, project_language, scp, supremal_cn, synthesize_central,
    synthesize_decentralized, Alphabet, Error, FuzzyLanguage, Grade, Projection, ScpOutcome, SynthesisOptions,
};
use rand::Rng;

use super::{random_sublanguage, random_supervisor, Instance};

pub type Check = Result<(), String>;

fn fail<T>(what: &str, inst: &Instance, extra: impl std::fmt::Display) -> Result<T, String> {
    Err(format!("{what}: L={} K={} {extra}", inst.l, inst.k))
}

fn ctrl(k: &FuzzyLanguage, l: &FuzzyLanguage) -> bool {
    is_controllable(k, l).unwrap().holds
}

fn obs(k: &FuzzyLanguage, l: &FuzzyLanguage, pr: &Projection) -> bool {
    is_observable(k, l, pr, l.alphabet().controllable()).unwrap().holds
}

fn strong(k: &FuzzyLanguage, l: &FuzzyLanguage, pr: &Projection) -> bool {
    is_strongly_observable(k, l, pr, l.alphabet().controllable())
        .unwrap()
        .holds
}

fn normal(k: &FuzzyLanguage, l: &FuzzyLanguage, pr: &Projection) -> bool {
    is_normal(k, l, pr).unwrap().holds
}

/// Controllable and observable specifications are achieved exactly by the
/// synthesized supervisor; others are refused.
pub fn central_round_trip(inst: &Instance) -> Check {
    let (k, l) = (&inst.k, &inst.l);
    let expected = ctrl(k, l) && obs(k, l, &inst.pr);
    match synthesize_central(k, l, &inst.pr, SynthesisOptions::default()) {
        Ok(sup) if expected => {
            let cl = closed_loop_central(l, &sup).unwrap();
            if cl != *k {
                return fail("central closed loop differs", inst, format!("got {cl}"));
            }
        }
        Ok(_) => return fail("synthesis accepted a failing spec", inst, ""),
        Err(Error::ConditionViolated(_)) if !expected => {}
        Err(e) => return fail("synthesis error", inst, e),
    }
    Ok(())
}

/// Every closed loop of a supervisor is controllable and observable.
pub fn central_converse<R: Rng>(inst: &Instance, rng: &mut R) -> Check {
    let sup = random_supervisor(rng, &inst.l, &inst.pr, inst.alphabet.controllable(), &inst.levels);
    let cl = closed_loop_central(&inst.l, &sup).unwrap();
    if !ctrl(&cl, &inst.l) || !obs(&cl, &inst.l, &inst.pr) {
        return fail(
            "closed loop not controllable and observable",
            inst,
            format!("loop {cl}"),
        );
    }
    Ok(())
}

pub fn decentralized_round_trip(inst: &Instance) -> Check {
    let (k, l) = (&inst.k, &inst.l);
    let sites = inst.sites();
    let expected = ctrl(k, l) && is_coobservable(k, l, &sites).unwrap().holds;
    match synthesize_decentralized(k, l, &sites, SynthesisOptions::default()) {
        Ok((s1, s2)) if expected => {
            let cl = closed_loop_decentralized(l, &s1, &s2).unwrap();
            if cl != *k {
                return fail("decentralized closed loop differs", inst, format!("got {cl}"));
            }
        }
        Ok(_) => return fail("decentralized synthesis accepted a failing spec", inst, ""),
        Err(Error::ConditionViolated(_)) if !expected => {}
        Err(e) => return fail("decentralized synthesis error", inst, e),
    }
    Ok(())
}

pub fn decentralized_converse<R: Rng>(inst: &Instance, rng: &mut R) -> Check {
    let sites = inst.sites();
    let s1 = random_supervisor(rng, &inst.l, &sites[0].projection, &sites[0].controllable, &inst.levels);
    let s2 = random_supervisor(rng, &inst.l, &sites[1].projection, &sites[1].controllable, &inst.levels);
    let cl = closed_loop_decentralized(&inst.l, &s1, &s2).unwrap();
    if !ctrl(&cl, &inst.l) || !is_coobservable(&cl, &inst.l, &sites).unwrap().holds {
        return fail(
            "decentralized loop not controllable and co-observable",
            inst,
            format!("loop {cl}"),
        );
    }
    Ok(())
}

/// Class-join observability agrees with the pairwise definition, and the
/// pairwise strong-observability characterization agrees with its
/// definition.
pub fn characterizations(inst: &Instance) -> Check {
    let (k, l, pr) = (&inst.k, &inst.l, &inst.pr);
    let c = inst.alphabet.controllable();
    let o = obs(k, l, pr);
    if o != observable_by_definition(k, l, pr, c).unwrap() {
        return fail(
            "observability characterization disagrees",
            inst,
            format!("class-join says {o}"),
        );
    }
    let s = strong(k, l, pr);
    if s != strongly_observable_by_definition(k, l, pr, c).unwrap() {
        return fail(
            "strong observability characterization disagrees",
            inst,
            format!("pairwise says {s}"),
        );
    }
    if s && !o {
        return fail("strongly observable but not observable", inst, "");
    }
    Ok(())
}

/// Observable (strongly observable) languages are closed under intersection;
/// controllable languages under union and intersection.
pub fn closures<R: Rng>(inst: &Instance, rng: &mut R) -> Check {
    let (l, pr) = (&inst.l, &inst.pr);
    let c = inst.alphabet.controllable();
    let pick = |rng: &mut R| {
        if rng.gen_bool(0.5) {
            closed_loop_central(l, &random_supervisor(rng, l, pr, c, &inst.levels)).unwrap()
        } else {
            random_sublanguage(rng, l, &inst.levels, 0.2)
        }
    };
    let (k1, k2) = (pick(rng), pick(rng));
    let meet = k1.intersection(&k2).unwrap();
    let join = k1.union(&k2).unwrap();
    let detail = || format!("K1={k1} K2={k2}");
    if obs(&k1, l, pr) && obs(&k2, l, pr) && !obs(&meet, l, pr) {
        return fail("observable intersection", inst, detail());
    }
    if strong(&k1, l, pr) && strong(&k2, l, pr) && !strong(&meet, l, pr) {
        return fail("strongly observable intersection", inst, detail());
    }
    if ctrl(&k1, l) && ctrl(&k2, l) && !(ctrl(&meet, l) && ctrl(&join, l)) {
        return fail("controllable union/intersection", inst, detail());
    }
    Ok(())
}

/// A normal language `𝒫⁻¹(M) ∩ L` for a random `M ⊆ 𝒫(L)`.
pub fn random_normal<R: Rng>(inst: &Instance, rng: &mut R) -> FuzzyLanguage {
    let projected = project_language(&inst.pr, &inst.l);
    let m = random_sublanguage(rng, &projected, &inst.levels, 0.3);
    inverse_project_meet(&inst.pr, &m, &inst.l).unwrap()
}

/// normal ⇒ observable, normal languages closed under union, and
/// controllable ∧ observable ∧ E_c ⊆ E_o ⇒ normal.
pub fn normality<R: Rng>(inst: &Instance, rng: &mut R) -> Check {
    let (k, l, pr) = (&inst.k, &inst.l, &inst.pr);
    if normal(k, l, pr) && !obs(k, l, pr) {
        return fail("normal but not observable", inst, "");
    }
    let (n1, n2) = (random_normal(inst, rng), random_normal(inst, rng));
    if !normal(&n1, l, pr) || !normal(&n2, l, pr) {
        return fail("generated language is not normal", inst, format!("N1={n1} N2={n2}"));
    }
    if !obs(&n1, l, pr) {
        return fail("normal but not observable", inst, format!("N={n1}"));
    }
    let join = n1.union(&n2).unwrap();
    if !normal(&join, l, pr) {
        return fail("normal union", inst, format!("N1={n1} N2={n2}"));
    }

    // widen E_o to cover E_c
    let a = &inst.alphabet;
    let observable = a.observable().union(a.controllable()).cloned().collect();
    let wide = Arc::new(Alphabet::new(a.events().clone(), a.controllable().clone(), observable).unwrap());
    let (kw, lw) = (
        k.with_alphabet(wide.clone()).unwrap(),
        l.with_alphabet(wide.clone()).unwrap(),
    );
    let prw = Projection::of_alphabet(&wide);
    if ctrl(&kw, &lw) && obs(&kw, &lw, &prw) && !normal(&kw, &lw, &prw) {
        return fail("controllable and observable with E_c ⊆ E_o but not normal", inst, "");
    }
    Ok(())
}

/// For observable `K`, same-class `s₁, s₂` and controllable `a`: two strict
/// members share a grade; a tight member never exceeds a strict one.
pub fn grades_on_observable(inst: &Instance) -> Check {
    let (k, l, pr) = (&inst.k, &inst.l, &inst.pr);
    if !obs(k, l, pr) {
        return Ok(());
    }
    for s1 in k.support() {
        for s2 in k.support() {
            if pr.apply(s1) != pr.apply(s2) {
                continue;
            }
            for a in inst.alphabet.controllable() {
                let (g1, g2) = (k.grade(&s1.extended(a)), k.grade(&s2.extended(a)));
                let strict1 = g1 < k.grade(s1).meet(l.grade(&s1.extended(a)));
                let strict2 = g2 < k.grade(s2).meet(l.grade(&s2.extended(a)));
                let ok = match (strict1, strict2) {
                    (true, true) => g1 == g2,
                    (false, true) => g1 <= g2,
                    (true, false) => g2 <= g1,
                    (false, false) => true,
                };
                if !ok {
                    return fail("strict and tight grades", inst, format!("s1={s1} s2={s2} a={a}"));
                }
            }
        }
    }
    Ok(())
}

/// On `{0,1}` instances the fuzzy checkers agree with the set-based ones.
pub fn crisp_agreement(inst: &Instance) -> Check {
    let (k, l, pr) = (&inst.k, &inst.l, &inst.pr);
    let sites = inst.sites();
    let pairs = [
        (
            "controllability",
            ctrl(k, l),
            crisp_reference(CrispQuery::Controllability, k, l),
        ),
        (
            "observability",
            obs(k, l, pr),
            crisp_reference(CrispQuery::Observability(pr), k, l),
        ),
        (
            "normality",
            normal(k, l, pr),
            crisp_reference(CrispQuery::Normality(pr), k, l),
        ),
        (
            "co-observability",
            is_coobservable(k, l, &sites).unwrap().holds,
            crisp_reference(CrispQuery::Coobservability(&sites), k, l),
        ),
    ];
    for (name, fuzzy, crisp) in pairs {
        let crisp = crisp.map_err(|e| e.to_string())?;
        if fuzzy != crisp {
            return fail(
                &format!("crisp {name} disagrees"),
                inst,
                format!("fuzzy {fuzzy}, crisp {crisp}"),
            );
        }
    }
    Ok(())
}

fn crisp_support(m: &FuzzyLanguage) -> FuzzyLanguage {
    FuzzyLanguage::build(m.alphabet().clone(), m.support().map(|s| (s.clone(), Grade::ONE))).unwrap()
}

/// A normal fuzzy `K` has a crisp-normal support.
pub fn normal_support<R: Rng>(inst: &Instance, rng: &mut R) -> Check {
    let n = random_normal(inst, rng);
    let (sk, sl) = (crisp_support(&n), crisp_support(&inst.l));
    if !crisp_reference(CrispQuery::Normality(&inst.pr), &sk, &sl).unwrap() {
        return fail("support of a normal language is not normal", inst, format!("N={n}"));
    }
    Ok(())
}

/// Fixed points agree with exhaustive search; `false` when the search is
/// over budget.
pub fn oracle_extrema(inst: &Instance, budget: u64) -> Result<bool, String> {
    let (k, l, pr) = (&inst.k, &inst.l, &inst.pr);
    let brute_inf = match brute_infimal_co(k, l, pr, budget) {
        Ok(m) => m,
        Err(Error::BudgetExceeded { .. }) => return Ok(false),
        Err(e) => return Err(e.to_string()),
    };
    let inf = infimal_co(k, l, pr).unwrap();
    if inf != brute_inf {
        return fail(
            "infimal_co differs from oracle",
            inst,
            format!("fixed point {inf}, oracle {brute_inf}"),
        );
    }
    if !ctrl(&inf, l) || !obs(&inf, l, pr) || !k.is_sublanguage_of(&inf).unwrap() {
        return fail("infimal_co is not a CO superlanguage", inst, &inf);
    }
    let brute_sup = brute_supremal_cn(k, l, pr, budget).map_err(|e| e.to_string())?;
    let sup = supremal_cn(k, l, pr).unwrap();
    if sup != brute_sup {
        return fail(
            "supremal_cn differs from oracle",
            inst,
            format!("fixed point {sup}, oracle {brute_sup}"),
        );
    }
    if !ctrl(&sup, l) || !normal(&sup, l, pr) || !sup.is_sublanguage_of(k).unwrap() {
        return fail("supremal_cn is not a CN sublanguage", inst, &sup);
    }
    Ok(true)
}

/// Exhaustive supervisor search agrees with controllability ∧ observability.
pub fn oracle_supervisor(inst: &Instance, budget: u64) -> Result<bool, String> {
    let (k, l, pr) = (&inst.k, &inst.l, &inst.pr);
    let exists = match brute_supervisor_exists(k, l, pr, budget) {
        Ok(b) => b,
        Err(Error::BudgetExceeded { .. }) => return Ok(false),
        Err(e) => return Err(e.to_string()),
    };
    let predicted = !k.is_empty() && ctrl(k, l) && obs(k, l, pr);
    if exists != predicted {
        return fail(
            "supervisor search disagrees",
            inst,
            format!("search {exists}, predicates {predicted}"),
        );
    }
    Ok(true)
}

pub fn oracle_decentralized(inst: &Instance, budget: u64) -> Result<bool, String> {
    let (k, l) = (&inst.k, &inst.l);
    let sites = inst.sites();
    let exists = match brute_decentralized_exists(k, l, &sites, budget) {
        Ok(b) => b,
        Err(Error::BudgetExceeded { .. }) => return Ok(false),
        Err(e) => return Err(e.to_string()),
    };
    let predicted = !k.is_empty() && ctrl(k, l) && is_coobservable(k, l, &sites).unwrap().holds;
    if exists != predicted {
        return fail(
            "decentralized search disagrees",
            inst,
            format!("search {exists}, predicates {predicted}"),
        );
    }
    Ok(true)
}

/// `scp` succeeds iff `L_a↓(CO) ⊆ L_l`, and a returned supervisor keeps the
/// closed loop between `L_a` and `L_l`.
pub fn scp_contract<R: Rng>(inst: &Instance, rng: &mut R) -> Check {
    let (l, pr) = (&inst.l, &inst.pr);
    let la = random_sublanguage(rng, l, &inst.levels, 0.4);
    let extra = random_sublanguage(rng, l, &inst.levels, 0.4);
    let ll = la.union(&extra).unwrap();
    let inf = infimal_co(&la, l, pr).unwrap();
    let within = inf.is_sublanguage_of(&ll).unwrap();
    match scp(&la, &ll, l, pr).unwrap() {
        ScpOutcome::Solved { supervisor, achieved } => {
            if !within {
                return fail(
                    "scp solved although the infimal escapes L_l",
                    inst,
                    format!("La={la} Ll={ll}"),
                );
            }
            let cl = closed_loop_central(l, &supervisor).unwrap();
            if cl != achieved || !la.is_sublanguage_of(&cl).unwrap() || !cl.is_sublanguage_of(&ll).unwrap() {
                return fail(
                    "scp closed loop outside [L_a, L_l]",
                    inst,
                    format!("La={la} Ll={ll} loop={cl}"),
                );
            }
        }
        ScpOutcome::NoSolution { infimal } => {
            if within || infimal != inf {
                return fail("scp refused a solvable instance", inst, format!("La={la} Ll={ll}"));
            }
        }
    }
    Ok(())
}
