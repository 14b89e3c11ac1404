use coopeuler::charfn::{
    characteristic_function, community_from_normal_form, cover, is_self_concavifying, is_superadditive, CharFnMode,
    OutsiderRule,
};
use coopeuler::exchange::{exchange_characteristic, exchange_euler_analysis, price_range, walras, ExchangeEconomy};
use coopeuler::game::{CoalitionGame, CommunityGame, Diagnostic, PopulationVector};
use coopeuler::homog::{euler_report, saddle_point, subdifferential_f, GainsModel};
use coopeuler::incentives::{
    is_incentive_compatible, ntu_fixed_point, truthful_outcome, MechanismGame, NtuOptions, NtuStatus, PaymentRule,
    WeightVector,
};
use coopeuler::lp::LpError;
use coopeuler::solutions::{
    core, core_equivalence, equal_treatment_core, is_balanced, nesting_check, restricted_game,
    shapley_euler_identities, shapley_value, CorePolytope,
};
use coopeuler::{Error, Rational};
use log::info;

use crate::input::{parse_vector, GameFile};
use crate::report::{Cell, Report, Table};

/// Coalition enumeration is limited to this many types.
pub const MAX_ENUMERATED_TYPES: usize = 10;

#[derive(Debug)]
pub enum CliError {
    Input(Vec<Diagnostic>),
    Size(String),
    Invariant(String),
}

impl CliError {
    pub fn input(msg: impl Into<String>) -> Self {
        CliError::Input(vec![Diagnostic::new("", msg)])
    }

    pub fn exit_code(&self) -> u8 {
        match self {
            CliError::Input(_) => 1,
            CliError::Size(_) => 2,
            CliError::Invariant(_) => 3,
        }
    }
}

impl From<Error> for CliError {
    fn from(e: Error) -> Self {
        match e {
            Error::Invalid(d) => CliError::Input(d),
            Error::Domain(_) | Error::EmptyCore => CliError::input(e.to_string()),
            Error::TooLarge(m) => CliError::Size(m),
            Error::Lp(LpError::Malformed(m)) => CliError::input(m),
            other => CliError::Invariant(other.to_string()),
        }
    }
}

pub type CmdResult = Result<Report, CliError>;

/// Settings shared by every command.
pub struct Context {
    pub game: GameFile,
    pub mode: CharFnMode,
    pub rule: OutsiderRule,
}

enum Model {
    Community(CommunityGame),
    Exchange(ExchangeEconomy),
}

impl Model {
    fn gains(&self) -> &dyn GainsModel<Rational> {
        match self {
            Model::Community(g) => g,
            Model::Exchange(e) => e,
        }
    }
}

impl Context {
    fn n(&self) -> usize {
        self.game.num_types()
    }

    fn guard_enumeration(&self) -> Result<(), CliError> {
        if self.n() > MAX_ENUMERATED_TYPES {
            return Err(CliError::Size(format!(
                "{} types; coalition enumeration is limited to {MAX_ENUMERATED_TYPES}",
                self.n()
            )));
        }
        Ok(())
    }

    fn model(&self) -> Result<Model, CliError> {
        Ok(match &self.game {
            GameFile::NormalForm(g) => Model::Community(community_from_normal_form(g, self.mode, &self.rule)?),
            GameFile::Coalition(g) => Model::Community(CommunityGame::from_coalition_game(g)?),
            GameFile::Community(g) => Model::Community(g.clone()),
            GameFile::Exchange(e) => Model::Exchange(e.clone()),
        })
    }

    fn coalition_game(&self) -> Result<CoalitionGame, CliError> {
        self.guard_enumeration()?;
        Ok(match &self.game {
            GameFile::NormalForm(g) => characteristic_function(g, self.mode, &self.rule)?,
            GameFile::Coalition(g) => g.clone(),
            GameFile::Community(g) => restricted_game(g)?,
            GameFile::Exchange(e) => exchange_characteristic(e)?,
        })
    }

    fn mechanism(&self) -> Result<MechanismGame, CliError> {
        Ok(match &self.game {
            GameFile::NormalForm(g) => MechanismGame::NormalForm { game: g.clone(), mode: self.mode, rule: self.rule.clone() },
            GameFile::Coalition(g) => MechanismGame::Community(CommunityGame::from_coalition_game(g)?),
            GameFile::Community(g) => MechanismGame::Community(g.clone()),
            GameFile::Exchange(_) => return Err(CliError::input("incentive analysis needs a game, not an exchange economy")),
        })
    }

    fn exchange(&self) -> Result<&ExchangeEconomy, CliError> {
        match &self.game {
            GameFile::Exchange(e) => Ok(e),
            other => Err(CliError::input(format!("exchange commands need an exchange file, got {}", other.kind()))),
        }
    }

    /// `--x`, defaulting to all ones.
    pub fn population(&self, x: Option<&str>) -> Result<PopulationVector, CliError> {
        let n = self.n();
        let Some(text) = x else {
            return Ok(PopulationVector::ones(n));
        };
        let v = parse_vector(text).map_err(|e| CliError::Input(vec![Diagnostic::new("--x", e)]))?;
        if v.len() != n {
            return Err(CliError::Input(vec![Diagnostic::new("--x", format!("expected {n} entries, got {}", v.len()))]));
        }
        PopulationVector::new(v).map_err(CliError::from)
    }
}

fn coalition_table(name: &str, g: &CoalitionGame, extra: Option<(&str, &CoalitionGame)>) -> Table {
    let mut cols = vec!["mask", "coalition", "value"];
    if let Some((label, _)) = extra {
        cols.push(label);
    }
    let mut t = Table::new(name, &cols);
    for s in g.grand().nonempty_subsets() {
        let mut row: Vec<Cell> = vec![(s.index() as u64).into(), s.to_string().into(), g.value(s).into()];
        if let Some((_, other)) = extra {
            row.push(other.value(s).into());
        }
        t.row(row);
    }
    t
}

fn mode_name(m: CharFnMode) -> &'static str {
    match m {
        CharFnMode::Standard => "standard",
        CharFnMode::PropertyRights => "property-rights",
    }
}

pub fn value(ctx: &Context) -> CmdResult {
    let g = ctx.coalition_game()?;
    let mut r = Report::new("value");
    r.field("kind", ctx.game.kind()).field("n", g.n());
    if matches!(ctx.game, GameFile::NormalForm(_)) {
        r.field("mode", mode_name(ctx.mode));
    }
    r.field("grand", g.value(g.grand()));
    r.table(coalition_table("values", &g, None));
    Ok(r)
}

pub fn cover_cmd(ctx: &Context) -> CmdResult {
    let g = ctx.coalition_game()?;
    let c = cover(&g)?;
    let mut r = Report::new("cover");
    r.field("superadditive", is_superadditive(&g))
        .field("totally_balanced", is_self_concavifying(&g)?)
        .field("balanced", is_balanced(&g)?)
        .field("grand_value", g.value(g.grand()))
        .field("grand_cover", c.value(c.grand()));
    r.table(coalition_table("cover", &g, Some(("cover", &c))));
    Ok(r)
}

pub fn shapley(ctx: &Context) -> CmdResult {
    let g = ctx.coalition_game()?;
    let sh = shapley_value(&g)?;
    let ids = shapley_euler_identities(&g)?;
    let mut r = Report::new("shapley");
    r.field("shapley", sh.values.clone())
        .field("total", sh.values.iter().cloned().sum::<Rational>())
        .field("grand_identity", ids.grand_identity);
    let mut t = Table::new("subgames", &["coalition", "shapley", "total", "worth", "holds"]);
    for s in &ids.subgames {
        t.row(vec![
            s.coalition.to_string().into(),
            s.values.clone().into(),
            (&s.total).into(),
            (&s.worth).into(),
            s.holds().into(),
        ]);
    }
    r.table(t);
    Ok(r)
}

fn polytope_rows(name: &str, p: &CorePolytope, n: usize) -> Result<Table, CliError> {
    let mut t = Table::new(name, &["type", "min", "max"]);
    for i in 0..n {
        let mut e = vec![Rational::from_integer(0.into()); n];
        e[i] = Rational::from_integer(1.into());
        let (lo, hi) = match p.range(&e)? {
            Some((lo, hi)) => (Cell::from(lo), Cell::from(hi)),
            None => (Cell::Missing, Cell::Missing),
        };
        t.row(vec![(i as u64 + 1).into(), lo, hi]);
    }
    Ok(t)
}

/// `probe` defaults to the Shapley value.
pub fn core_cmd(ctx: &Context, probe: Option<&str>) -> CmdResult {
    let g = ctx.coalition_game()?;
    let c = core(&g)?;
    let probe = match probe {
        Some(text) => {
            let v = parse_vector(text).map_err(|e| CliError::Input(vec![Diagnostic::new("--probe", e)]))?;
            if v.len() != g.n() {
                return Err(CliError::Input(vec![Diagnostic::new("--probe", format!("expected {} entries", g.n()))]));
            }
            v
        }
        None => shapley_value(&g)?.values,
    };
    let mut r = Report::new("core");
    r.field("empty", c.is_empty())
        .field("lexicographic_min", c.lexicographic_min()?)
        .field("singleton", c.singleton()?)
        .field("probe", probe.clone())
        .field("contains_probe", c.contains(&probe)?);
    if !c.is_empty() {
        r.table(polytope_rows("ranges", &c, g.n())?);
    }
    Ok(r)
}

fn check_k(k: u64) -> Result<(), CliError> {
    if k == 0 {
        return Err(CliError::Input(vec![Diagnostic::new("--k", "must be at least 1")]));
    }
    Ok(())
}

pub fn etcore(ctx: &Context, k: u64) -> CmdResult {
    check_k(k)?;
    let model = ctx.model()?;
    info!("equal-treatment core at k = {k}");
    let c = equal_treatment_core(model.gains(), k)?;
    let mut r = Report::new("etcore");
    r.field("k", k).field("empty", c.is_empty()).field("lexicographic_min", c.lexicographic_min()?);
    if !c.is_empty() {
        r.table(polytope_rows("ranges", &c, ctx.n())?);
    }
    Ok(r)
}

pub fn core_equiv(ctx: &Context, k: u64) -> CmdResult {
    check_k(k)?;
    let model = ctx.model()?;
    let mut r = Report::new("core-equiv");
    r.field("k", k).field("core_equivalent", core_equivalence(model.gains(), k)?);
    let mut t = Table::new("nesting", &["k", "gradient_face_in_next", "next_in_current"]);
    for j in 1..=k {
        let nest = nesting_check(model.gains(), j)?;
        t.row(vec![j.into(), nest.gradient_in_next.into(), nest.next_in_current.into()]);
    }
    r.table(t);
    Ok(r)
}

pub fn gap(ctx: &Context, x: Option<&str>, kmax: u64) -> CmdResult {
    check_k(kmax)?;
    let model = ctx.model()?;
    let x = ctx.population(x)?;
    let rep = euler_report(model.gains(), &x, kmax)?;
    let mut r = Report::new("gap");
    r.field("x", rep.x.clone())
        .field("value", &rep.value)
        .field("differentiable", rep.differentiable)
        .field("gradient", rep.gradient.clone())
        .field("stabilization", rep.stabilization);
    let mut t = Table::new("gaps", &["k", "E_k"]);
    for (k, e) in &rep.discrete {
        t.row(vec![(*k).into(), e.into()]);
    }
    t.row(vec!["inf".into(), (&rep.infinitesimal).into()]);
    r.table(t);
    Ok(r)
}

pub fn saddle(ctx: &Context, x: Option<&str>) -> CmdResult {
    let model = ctx.model()?;
    let x = ctx.population(x)?;
    let sp = saddle_point(model.gains(), &x)?;
    let sub = subdifferential_f(model.gains(), &x)?;
    let mut r = Report::new("saddle");
    r.field("x", sp.x.clone())
        .field("value", &sp.value)
        .field("r", sp.r.clone())
        .field("direct", sp.direct.clone())
        .field("m", sp.m.clone())
        .field("transfer_balance", sp.transfer_balance())
        .field("subdifferential_singleton", sub.is_singleton()?);
    let mut t = Table::new("assignment", &["activity", "level"]);
    for (label, level) in sp.assignment() {
        t.row(vec![label.into(), level.into()]);
    }
    r.table(t);
    Ok(r)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, clap::ValueEnum)]
pub enum Payment {
    Marginal,
    Shapley,
    Core,
}

pub fn ic(ctx: &Context, payment: Payment, k: u64, x: Option<&str>) -> CmdResult {
    check_k(k)?;
    let game = ctx.mechanism()?;
    let x = ctx.population(x)?;
    let rule = match payment {
        Payment::Marginal => PaymentRule::MarginalContribution(k),
        Payment::Shapley => PaymentRule::ShapleyOfCover,
        Payment::Core => PaymentRule::CoreSelection,
    };
    let truthful = truthful_outcome(&game, rule, &x)?;
    let verdicts = is_incentive_compatible(&game, rule, &[], &x)?;
    let mut r = Report::new("ic");
    r.field("payment", format!("{payment:?}").to_lowercase())
        .field("value", &truthful.value)
        .field("r", truthful.r.clone())
        .field("m", truthful.m.clone())
        .field("deficit", &truthful.deficit)
        .field("compatible", verdicts.iter().all(|v| v.compatible_within_family()));
    let mut t = Table::new("players", &["type", "truthful", "gain", "compatible", "candidates", "witness"]);
    for v in &verdicts {
        t.row(vec![
            (v.player as u64 + 1).into(),
            (&v.truthful).into(),
            (&v.gain).into(),
            v.compatible_within_family().into(),
            v.candidates.into(),
            v.witness.clone().into(),
        ]);
    }
    r.table(t);
    Ok(r)
}

pub struct NtuArgs<'a> {
    pub x: Option<&'a str>,
    pub gamma0: Option<&'a str>,
    pub tol: Option<&'a str>,
    pub max_iter: usize,
    pub damping: bool,
}

pub fn ntu(ctx: &Context, args: &NtuArgs) -> CmdResult {
    let model = ctx.model()?;
    let x = ctx.population(args.x)?;
    let n = ctx.n();
    let gamma0 = match args.gamma0 {
        None => WeightVector::uniform(n),
        Some(text) => {
            let v = parse_vector(text).map_err(|e| CliError::Input(vec![Diagnostic::new("--gamma0", e)]))?;
            if v.len() != n {
                return Err(CliError::Input(vec![Diagnostic::new("--gamma0", format!("expected {n} entries"))]));
            }
            WeightVector::new(v).map_err(|e| CliError::Input(vec![Diagnostic::new("--gamma0", e.to_string())]))?
        }
    };
    let mut opts = NtuOptions { max_iter: args.max_iter, damping: args.damping, ..NtuOptions::default() };
    if let Some(t) = args.tol {
        opts.tol = crate::input::parse_rational(t).map_err(|e| CliError::Input(vec![Diagnostic::new("--tol", e)]))?;
    }
    let out = ntu_fixed_point(model.gains(), &x, &gamma0, &opts)?;
    let (status, period) = match out.status {
        NtuStatus::Converged => ("converged", None),
        NtuStatus::MaxIter => ("max_iter", None),
        NtuStatus::Cycling { period } => ("cycling", Some(period as u64)),
    };
    let mut r = Report::new("ntu");
    r.field("status", status)
        .field("period", period)
        .field("iterations", out.iterations)
        .field("tol", &opts.tol)
        .field("gamma", out.gamma.clone())
        .field("r", out.r.clone())
        .field("m", out.m.clone());
    Ok(r)
}

pub fn exchange_walras(ctx: &Context, x: Option<&str>) -> CmdResult {
    let e = ctx.exchange()?;
    let x = ctx.population(x)?;
    let w = walras(e, &x)?;
    let mut r = Report::new("exchange walras");
    r.field("value", &w.value).field("prices", w.prices.clone());
    let mut t = Table::new("types", &["type", "r", "m", "z"]);
    for i in 0..e.traders().len() {
        t.row(vec![(i as u64 + 1).into(), w.r[i].clone().into(), w.m[i].clone().into(), w.z[i].clone().into()]);
    }
    r.table(t);
    Ok(r)
}

pub fn exchange_prices(ctx: &Context, x: Option<&str>) -> CmdResult {
    let e = ctx.exchange()?;
    let x = ctx.population(x)?;
    let mut r = Report::new("exchange prices");
    let mut t = Table::new("price_ranges", &["commodity", "min", "max"]);
    for c in 0..e.commodities() {
        let (lo, hi) = price_range(e, &x, c)?;
        let side = |v: Option<Rational>, inf: &str| v.map_or(Cell::Text(inf.to_string()), Cell::Num);
        t.row(vec![(c as u64 + 1).into(), side(lo, "-inf"), side(hi, "inf")]);
    }
    r.table(t);
    Ok(r)
}

pub fn exchange_game(ctx: &Context) -> CmdResult {
    let e = ctx.exchange()?;
    ctx.guard_enumeration()?;
    let g = exchange_characteristic(e)?;
    let mut r = Report::new("exchange game");
    r.field("totally_balanced", is_self_concavifying(&g)?);
    r.table(coalition_table("values", &g, None));
    Ok(r)
}

pub fn exchange_euler(ctx: &Context, x: Option<&str>, k: u64) -> CmdResult {
    check_k(k)?;
    let e = ctx.exchange()?;
    ctx.guard_enumeration()?;
    let x = ctx.population(x)?;
    let a = exchange_euler_analysis(e, &x, k)?;
    let mut r = Report::new("exchange euler");
    r.field("value", &a.gaps.value)
        .field("differentiable", a.gaps.differentiable)
        .field("gradient", a.gaps.gradient.clone())
        .field("totally_balanced", a.totally_balanced)
        .field("core_equivalent", a.core_equivalent);
    let mut t = Table::new("gaps", &["k", "E_k"]);
    for (k, g) in &a.gaps.discrete {
        t.row(vec![(*k).into(), g.into()]);
    }
    t.row(vec!["inf".into(), (&a.gaps.infinitesimal).into()]);
    r.table(t);
    Ok(r)
}

pub fn validate(ctx: &Context) -> CmdResult {
    let mut r = Report::new("validate");
    r.field("valid", true).field("kind", ctx.game.kind()).field("types", ctx.n());
    if let GameFile::Community(g) = &ctx.game {
        r.field("communities", g.communities().len());
    }
    if ctx.n() > MAX_ENUMERATED_TYPES {
        r.field("warning", format!("coalition commands are limited to {MAX_ENUMERATED_TYPES} types"));
    }
    Ok(r)
}
