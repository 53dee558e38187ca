//! One runner per scenario section. Each returns its CSV files in memory.

use std::collections::BTreeMap;

use funex_core::behavior::{bias_constraint, business_cycle, iterate, RegimeLabel, Verdict, WeightingRegime};
use funex_core::bid::{
    birkhoff_decompose, budget_bounds, rom_bounds, selection_report, superpose, uncovered_relations,
    validate_bistochastic, BistochasticMatrix, DiagOperator, Permutation, SupportMatrix, SUM_TOLERANCE,
};
use funex_core::dynamics::{
    canonical, characteristic_roots, check_outcome_sum, perfect_fit_check, solve, uniform_grid, Amplitudes,
    CanonicalKind, CharacteristicRoots, DynamicsParams, DynamicsSolution, FitOutcome, RootRegime, FIT_TOLERANCE,
};
use funex_core::exchange::{
    demand_capital, global_capital_split, growth_report, supply_capital, ExchangeSpec, FrameReference,
};
use funex_core::industrial::{
    apply_obsolescence, block_birkhoff, block_expand, comparative_advantage, BlockPattern, Candidate,
    ObsolescenceEvent, SplitOperators,
};
use funex_core::valuation::{
    additivity_check, org_capacity, payoff, profitability_complexity, project_value, prospect_value, Capacity,
    EventSet, OrgStructure, OutcomeSet, ValueParams,
};

use crate::scenario::{
    BehaviorSection, BidSection, BlocksSection, DynamicsSection, ExchangeSection, ExternalitySection,
    IndustrialSection, RegimeKind, RegimeSection, SideSection, ValuationSection,
};
use crate::table::{indices, num, Table};

#[derive(Debug)]
pub struct SectionError(pub String);

impl From<funex_core::Error> for SectionError {
    fn from(e: funex_core::Error) -> Self {
        Self(e.to_string())
    }
}

type Step<T> = Result<T, SectionError>;

fn fail<T>(msg: impl Into<String>) -> Step<T> {
    Err(SectionError(msg.into()))
}

#[derive(Debug, Default)]
pub struct Output {
    pub files: Vec<(String, Vec<u8>)>,
    pub warnings: Vec<String>,
}

impl Output {
    fn file(&mut self, name: &str, table: Table) {
        self.files.push((name.to_string(), table.finish()));
    }
}

fn flag(b: bool) -> &'static str {
    if b {
        "true"
    } else {
        "false"
    }
}

pub fn exchange(s: &ExchangeSection) -> Step<Output> {
    let frame = |f: &crate::scenario::FrameSection, supply: bool| -> Step<FrameReference> {
        let base = if supply {
            FrameReference::supply(f.rho, f.functions, f.complexity, f.capital)?
        } else {
            FrameReference::demand(f.rho, f.functions, f.complexity, f.capital)?
        };
        Ok(base.with_maturity(f.maturity)?)
    };
    let spec = ExchangeSpec::new(
        frame(&s.supply, true)?,
        frame(&s.demand, false)?,
        s.rho_star,
        s.complexity,
    )?
    .with_maturity(s.maturity)?;
    let report = growth_report(&spec)?;
    let c_s = s.complexity_supply.unwrap_or(s.complexity);
    let c_d = s.complexity_demand.unwrap_or(s.complexity);
    let k_s = supply_capital(&spec.supply, c_s, spec.rho_star)?;
    let k_d = demand_capital(&spec.demand, c_d, spec.rho_star)?;
    let k = global_capital_split(&spec, c_s, c_d)?;

    let mut out = Output::default();
    let rule = report.threshold_rule_applies(&spec);
    if !rule {
        out.warnings
            .push("c/M < 0: growth sign read from the capital increase, not the threshold".into());
    }
    let mut t = Table::new(&[
        "ratio",
        "threshold",
        "delta_capital",
        "grows",
        "regime",
        "threshold_rule_applies",
        "supply_capital",
        "demand_capital",
        "global_capital",
    ]);
    t.row([
        num(report.ratio),
        num(report.threshold),
        num(report.delta_capital),
        flag(report.grows).into(),
        format!("{:?}", report.regime),
        flag(rule).into(),
        num(k_s),
        num(k_d),
        num(k),
    ]);
    out.file("exchange_growth.csv", t);
    Ok(out)
}

fn event(states: &[usize]) -> Step<EventSet> {
    Ok(EventSet::from_states(states)?)
}

pub fn valuation(s: &ValuationSection) -> Step<Output> {
    let capacity = match (&s.capacity, &s.probabilities) {
        (Some(table), _) => Capacity::from_table(s.states, table.clone())?,
        (None, Some(p)) => {
            if p.len() != s.states {
                return fail(format!("{} probabilities for {} states", p.len(), s.states));
            }
            Capacity::additive(p)?
        }
        (None, None) => return fail("no capacity given"),
    };
    let mut out = Output::default();
    let mut t = Table::new(&["quantity", "value", "note"]);
    if !s.prospect.is_empty() {
        let terms = s
            .prospect
            .iter()
            .map(|p| Ok((p.outcome, event(&p.states)?)))
            .collect::<Step<Vec<_>>>()?;
        let v = prospect_value(&terms, &capacity, |x| x)?;
        t.row([String::from("prospect_value"), num(v), String::new()]);
    }
    if let (Some(deps), Some(funcs)) = (&s.departments, &s.functions) {
        let departments = deps.iter().map(|d| event(d)).collect::<Step<Vec<_>>>()?;
        let function_events = funcs
            .iter()
            .map(|f| f.iter().map(|a| event(a)).collect::<Step<Vec<_>>>())
            .collect::<Step<Vec<_>>>()?;
        let org = OrgStructure::new(s.states, departments, function_events)?;
        let c_org = org_capacity(&org, &capacity)?;
        let additivity = additivity_check(&org, &capacity)?;
        t.row([String::from("org_capacity"), num(c_org), format!("{additivity:?}")]);
        if let Some(c_tech) = s.c_tech {
            let c = profitability_complexity(c_org, c_tech)?;
            t.row([
                String::from("profitability_complexity"),
                c.to_string(),
                format!("c_tech = {c_tech}"),
            ]);
        }
    }
    if let Some(realized) = &s.realized {
        let outcomes = OutcomeSet::realized(realized.clone())?;
        t.row([String::from("outcome_sum"), num(outcomes.sum()), String::new()]);
        if let Some(c) = s.capability {
            t.row([String::from("payoff"), num(payoff(&outcomes, c)?), String::new()]);
        }
        if let Some(v) = &s.value {
            let params = ValueParams::new(v.rho, v.c_gain, v.c_loss)?;
            t.row([
                String::from("project_value"),
                num(project_value(&outcomes, &params)?),
                String::new(),
            ]);
        }
    }
    out.file("valuation.csv", t);
    Ok(out)
}

pub fn bid(s: &BidSection) -> Step<Output> {
    let m = validate_bistochastic(&s.matrix, SUM_TOLERANCE)?;
    let e = DiagOperator::cost(s.cost.clone())?;
    let i = DiagOperator::information(s.information.clone())?;
    let d = birkhoff_decompose(&m)?;
    let report = selection_report(&d, &e, &i)?;
    let (b_minus, b_plus) = budget_bounds(&e, &i)?;

    let mut out = Output::default();
    let mut terms = Table::new(&["beta", "weight", "permutation", "budget", "lower", "upper", "class"]);
    for (beta, (term, a)) in d.terms().iter().zip(&report.terms).enumerate() {
        terms.row([
            beta.to_string(),
            num(term.weight),
            indices(term.permutation.mapping()),
            num(a.budget),
            num(a.lower),
            num(a.upper),
            format!("{:?}", a.class),
        ]);
    }
    out.file("bid_terms.csv", terms);

    let mut summary = Table::new(&["quantity", "value"]);
    summary.row(["terms".into(), d.len().to_string()]);
    summary.row(["w_plus".into(), num(report.w_plus)]);
    summary.row(["w_minus".into(), num(report.w_minus)]);
    summary.row(["w_mean".into(), num(report.w_mean)]);
    summary.row([String::from("pathology"), flag(report.pathology).into()]);
    summary.row(["budget_minus".into(), num(b_minus)]);
    summary.row(["budget_plus".into(), num(b_plus)]);
    if report.pathology {
        out.warnings
            .push(format!("pathology: W+ = {} < W- = {}", report.w_plus, report.w_minus));
    }
    if let (Some(bk), Some(pro)) = (s.best_knowledge, s.professionalism) {
        let rom = rom_bounds(&e, &i, bk, pro, Some(&m))?;
        summary.row(["rom_lower".into(), num(rom.lower)]);
        summary.row(["rom_upper".into(), num(rom.upper)]);
    }
    if let Some(select) = &s.select {
        let chosen = select
            .iter()
            .map(|&k| match d.terms().get(k) {
                Some(t) => Ok(t.permutation.clone()),
                None => fail(format!("selected term {k} of {}", d.len())),
            })
            .collect::<Step<Vec<_>>>()?;
        let solution = superpose(&chosen)?;
        let missing = uncovered_relations(&m, &solution)?;
        summary.row(["uncovered_relations".into(), missing.len().to_string()]);
        if !missing.is_empty() {
            out.warnings.push(format!(
                "selection leaves {} expected relations uncovered",
                missing.len()
            ));
        }
        let mut u = Table::new(&["row", "col"]);
        for (r, c) in missing {
            u.row([r.to_string(), c.to_string()]);
        }
        out.file("bid_uncovered.csv", u);
    }
    out.file("bid_summary.csv", summary);
    Ok(out)
}

fn blocks(s: &BlocksSection, out: &mut Output) -> Step<()> {
    let base = Permutation::from_mapping(s.base.clone())?;
    let pattern = BlockPattern::new(base.clone(), s.orders.clone())?;
    let mut map = BTreeMap::new();
    for b in &s.blocks {
        if b.row >= base.order() {
            return fail(format!("block row {} of {}", b.row, base.order()));
        }
        let m = validate_bistochastic(&b.matrix, SUM_TOLERANCE)?;
        if map.insert((b.row, base.image(b.row)), m).is_some() {
            return fail(format!("block row {} given twice", b.row));
        }
    }
    let bm = block_expand(pattern.clone(), map)?;
    let bd = block_birkhoff(&bm)?;
    let splits = match (&s.cost, &s.information) {
        (Some(e), Some(i)) => Some(SplitOperators::uniform(e, i, &pattern)?),
        (None, None) => None,
        _ => return fail("block cost and information go together"),
    };
    let mut t = Table::new(&["term", "weight", "block", "column_block", "permutation", "block_budget"]);
    for (alpha, (term, perms)) in bd.decomposition.terms().iter().zip(&bd.block_terms).enumerate() {
        for (i, pi) in perms.iter().enumerate() {
            let l = base.image(i);
            let budget = match &splits {
                Some(sp) => num(sp.block_budget(i, l, pi)?),
                None => String::new(),
            };
            t.row([
                alpha.to_string(),
                num(term.weight),
                i.to_string(),
                l.to_string(),
                indices(pi.mapping()),
                budget,
            ]);
        }
    }
    out.file("industrial_blocks.csv", t);
    let mut e = Table::new(&["quantity", "value"]);
    e.row(["expanded_order".into(), pattern.expanded_order().to_string()]);
    e.row(["terms".into(), bd.decomposition.len().to_string()]);
    e.row([
        "reconstruction_error".into(),
        num(bd.decomposition.reconstruction_error(&bm.assemble())),
    ]);
    e.row([
        "block_reconstruction_error".into(),
        num(bd.block_reconstruction_error(&bm)),
    ]);
    out.file("industrial_blocks_summary.csv", e);
    Ok(())
}

fn externality(s: &ExternalitySection, out: &mut Output) -> Step<()> {
    let events: Vec<ObsolescenceEvent> = s
        .obsolescence
        .iter()
        .map(|o| ObsolescenceEvent {
            time: o.time,
            index: o.index,
        })
        .collect();
    let candidates = s
        .candidates
        .iter()
        .map(|c| {
            let selection = match (&c.selection, &c.support) {
                (Some(p), None) => Permutation::from_mapping(p.clone())?.to_support(),
                (None, Some(rows)) => SupportMatrix::from_rows(rows)?,
                _ => return fail(format!("candidate {} needs one selection", c.beta)),
            };
            Ok(Candidate {
                beta: c.beta,
                e_split: apply_obsolescence(&c.e_split, &events, s.time)?,
                i_split: c.i_split.clone(),
                selection,
            })
        })
        .collect::<Step<Vec<_>>>()?;
    let choice = comparative_advantage(&candidates)?;
    let mut t = Table::new(&["beta", "h", "class", "negative_terms", "chosen"]);
    for (beta, r) in &choice.reports {
        t.row([
            beta.to_string(),
            num(r.h),
            format!("{:?}", r.classification),
            r.negative_terms.len().to_string(),
            flag(*beta == choice.beta).into(),
        ]);
    }
    out.file("industrial_externality.csv", t);
    let mut n = Table::new(&["beta", "k", "l", "product", "semantics"]);
    for (beta, r) in &choice.reports {
        for term in &r.negative_terms {
            n.row([
                beta.to_string(),
                term.k.to_string(),
                term.l.to_string(),
                num(term.product),
                format!("{:?}", term.semantics),
            ]);
        }
    }
    out.file("industrial_negative_terms.csv", n);
    if choice.tie {
        out.warnings.push(format!(
            "comparative advantage not unique: several candidates reach H = {}",
            choice.h
        ));
    }
    Ok(())
}

pub fn industrial(s: &IndustrialSection) -> Step<Output> {
    let mut out = Output::default();
    if let Some(b) = &s.blocks {
        blocks(b, &mut out)?;
    }
    if let Some(x) = &s.externality {
        externality(x, &mut out)?;
    }
    Ok(out)
}

fn kind_of(label: &str) -> Step<CanonicalKind> {
    CanonicalKind::ALL
        .into_iter()
        .find(|k| k.label() == label)
        .map_or_else(|| fail(format!("unknown canonical kind `{label}`")), Ok)
}

fn regime_name(r: RootRegime) -> String {
    format!("{r:?}")
}

fn side_solution(side: &SideSection, supply: bool) -> Step<(CharacteristicRoots, DynamicsSolution)> {
    let p = if supply {
        DynamicsParams::supply(side.kappa, side.complexity, side.maturity)?
    } else {
        DynamicsParams::demand(side.kappa, side.complexity, side.maturity)?
    };
    let amplitudes = match (side.amplitudes, side.amplitude, side.phase) {
        (Some([a, b]), None, None) => Amplitudes::Pair(a, b),
        (None, Some(amplitude), phase) => Amplitudes::Polar {
            amplitude,
            phase: phase.unwrap_or(0.0),
        },
        (None, None, None) => Amplitudes::Pair(1.0, 1.0),
        _ => return fail("give amplitudes or amplitude/phase, not both"),
    };
    Ok((characteristic_roots(&p)?, solve(&p, amplitudes)?))
}

pub fn dynamics(s: &DynamicsSection) -> Step<Output> {
    let mut out = Output::default();
    if let Some(c) = &s.canonical {
        let kinds = c.kinds.iter().map(|k| kind_of(k)).collect::<Step<Vec<_>>>()?;
        let curves = kinds
            .iter()
            .map(|&k| Ok(canonical(k, c.kappa)?))
            .collect::<Step<Vec<_>>>()?;
        let grid = uniform_grid(0.0, s.m_max.unwrap_or(5.0 * c.kappa), s.points);
        let mut header = vec!["m"];
        header.extend(kinds.iter().map(|k| k.label()));
        let mut t = Table::new(&header);
        for &m in &grid {
            let mut row = vec![num(m)];
            row.extend(curves.iter().map(|s| num(s.eval(m))));
            t.row(row);
        }
        out.file("dynamics_canonical.csv", t);
    }
    if let (Some(sup), Some(dem)) = (&s.supply, &s.demand) {
        let (rs, ss) = side_solution(sup, true)?;
        let (rd, sd) = side_solution(dem, false)?;
        let m_max = s.m_max.unwrap_or(5.0 * sup.kappa.abs().max(dem.kappa.abs()));
        let grid = uniform_grid(0.0, m_max, s.points);

        let mut roots = Table::new(&[
            "side",
            "kappa",
            "m_over_c",
            "regime",
            "discriminant",
            "root1_re",
            "root1_im",
            "root2_re",
            "root2_im",
        ]);
        for (name, r) in [("supply", &rs), ("demand", &rd)] {
            roots.row([
                name.to_string(),
                num(r.kappa),
                num(r.m_over_c),
                regime_name(r.regime),
                num(r.discriminant),
                num(r.roots[0].re),
                num(r.roots[0].im),
                num(r.roots[1].re),
                num(r.roots[1].im),
            ]);
            if r.regime == RootRegime::RealRepeated {
                out.warnings.push(format!(
                    "{name} roots are repeated: outside the cases the model discusses"
                ));
            }
        }
        out.file("dynamics_roots.csv", roots);

        let fit = perfect_fit_check(&ss, &sd, &grid);
        let (vs, vd) = (ss.curve(&grid), sd.curve(&grid));
        let scale = vs.iter().chain(&vd).fold(1.0f64, |a, v| a.max(v.abs()));
        let mut curves = Table::new(&["m", "rho_supply", "rho_demand", "fit_flag"]);
        for ((m, a), b) in grid.iter().zip(&vs).zip(&vd) {
            let fits = (a - b).abs() <= FIT_TOLERANCE * scale;
            curves.row([num(*m), num(*a), num(*b), u8::from(fits).to_string()]);
        }
        out.file("dynamics_curves.csv", curves);

        let mut f = Table::new(&["outcome", "m"]);
        match &fit {
            FitOutcome::PerfectFit => f.row(["PerfectFit", ""]),
            FitOutcome::NoFit => f.row(["NoFit", ""]),
            FitOutcome::ZeroPriceCrossings(ms) => {
                for &m in ms {
                    f.row([String::from("ZeroPriceCrossing"), num(m)]);
                }
                out.warnings.push(format!(
                    "{} zero time-cost crossings (gifts, thefts or frauds)",
                    ms.len()
                ));
            }
        }
        out.file("dynamics_fit.csv", f);
    }
    if let Some(sums) = &s.outcome_sums {
        check_outcome_sum(sums)?;
    }
    Ok(out)
}

fn regime(r: &RegimeSection) -> Step<WeightingRegime> {
    let labelled = |label: RegimeLabel| -> Step<WeightingRegime> {
        match (r.kappa, r.m_over_c) {
            (Some(k), None) if label == RegimeLabel::Weird => Ok(WeightingRegime::weird(k)?),
            (Some(k), None) => Ok(WeightingRegime::poor(k)?),
            (None, Some(x)) => Ok(WeightingRegime::from_m_over_c(label, x)?),
            (None, None) => fail("regime needs kappa or m_over_c"),
            (Some(_), Some(_)) => fail("regime takes kappa or m_over_c, not both"),
        }
    };
    match r.label {
        RegimeKind::Weird => labelled(RegimeLabel::Weird),
        RegimeKind::Poor => labelled(RegimeLabel::Poor),
        RegimeKind::Custom => match r.gamma {
            Some(g) => Ok(WeightingRegime::custom(g)?),
            None => fail("custom regime needs gamma"),
        },
    }
}

pub fn behavior(s: &BehaviorSection) -> Step<Output> {
    let mut out = Output::default();
    let mut summary = Table::new(&[
        "regime",
        "label",
        "gamma",
        "kappa",
        "p_star",
        "bias_constraint",
        "converged",
        "trapped",
        "escaped",
        "oscillating",
        "max_iterations",
    ]);
    let mut paths = Table::new(&["regime", "start", "n", "p"]);
    let mut cycles = Table::new(&["regime", "p0", "p_star", "outcome", "subjective_delta", "feeling"]);
    for (k, r) in s.regimes.iter().enumerate() {
        let w = regime(r)?;
        let p_star = w.fixed_point()?;
        let bias = match w.label {
            RegimeLabel::Custom => String::new(),
            _ => num(bias_constraint(&w)?),
        };
        let mut counts: BTreeMap<&str, usize> = BTreeMap::new();
        for (j, &p0) in s.starts.iter().enumerate() {
            let tr = iterate(w.gamma, p0, s.max_iter, s.tolerance)?;
            let key = match tr.verdict {
                Verdict::ConvergedToFixedPoint => "converged",
                Verdict::TrappedAtZero => "trapped",
                Verdict::EscapedToOne => "escaped",
                Verdict::Oscillating => "oscillating",
                Verdict::MaxIterations => "max_iterations",
            };
            *counts.entry(key).or_default() += 1;
            match tr.verdict {
                Verdict::Oscillating => out.warnings.push(format!(
                    "regime {k}: start {p0} oscillates, unexpected for a monotone weighting"
                )),
                Verdict::MaxIterations => out
                    .warnings
                    .push(format!("regime {k}: start {p0} did not settle in {} steps", s.max_iter)),
                _ => {}
            }
            for (n, p) in tr.points.iter().enumerate() {
                paths.row([k.to_string(), j.to_string(), n.to_string(), num(*p)]);
            }
        }
        let count = |key| counts.get(key).copied().unwrap_or(0).to_string();
        summary.row([
            k.to_string(),
            format!("{:?}", w.label),
            num(w.gamma),
            num(w.kappa),
            p_star.map_or_else(String::new, num),
            bias,
            count("converged"),
            count("trapped"),
            count("escaped"),
            count("oscillating"),
            count("max_iterations"),
        ]);
        if p_star.is_some() {
            for c in &s.cycles {
                let acc = business_cycle(c.p0, w.gamma, c.outcome)?;
                cycles.row([
                    k.to_string(),
                    num(acc.p0),
                    num(acc.p_star),
                    num(acc.outcome),
                    num(acc.subjective_delta),
                    format!("{:?}", acc.feeling),
                ]);
            }
        }
    }
    out.file("behavior_regimes.csv", summary);
    out.file("behavior_trajectories.csv", paths);
    out.file("behavior_cycles.csv", cycles);
    Ok(out)
}

/// Birkhoff terms of a bistochastic matrix as CSV.
pub fn decompose(m: &BistochasticMatrix) -> Step<Vec<u8>> {
    let d = birkhoff_decompose(m)?;
    let mut t = Table::new(&["beta", "weight", "permutation", "cycles"]);
    for (beta, term) in d.terms().iter().enumerate() {
        let cycles: Vec<String> = term
            .permutation
            .cycles()
            .iter()
            .map(|c| format!("({})", indices(c)))
            .collect();
        t.row([
            beta.to_string(),
            num(term.weight),
            indices(term.permutation.mapping()),
            cycles.join(""),
        ]);
    }
    Ok(t.finish())
}
