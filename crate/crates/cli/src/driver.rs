//! Commands and the verification suite.

use num_rational::{BigRational, Ratio};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde_json::{json, Map, Value};
use toric_wall::bo::{
    blowup_restrictions, bo_geometric_at, bo_images, shared_labels, CrossingModel, CrossingPair,
    Direction,
};
use toric_wall::field::FpMatrix;
use toric_wall::fixed::{LocalizedClass, Side, Space};
use toric_wall::git::{Anticone, GitDatum, ValidationReport};
use toric_wall::kring::{KElement, SpecializationPoint};
use toric_wall::twist::{
    composites, exceptional_data, substack_class, twist_operator, ExceptionalDatum,
};
use toric_wall::wall::{analyze_wall, build_blowup, TildeKind, WallCrossing};
use toric_wall::Error;

use crate::kernel::kernel_checks;
use crate::problem::{ParseError, ProblemFile};
use crate::report::Report;

/// Process exit status.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub enum Status {
    Pass = 0,
    VerificationFailure = 1,
    InputError = 2,
    Unsupported = 3,
}

impl Status {
    pub fn code(self) -> i32 {
        self as i32
    }

    /// Worst of two statuses when combining several runs.
    pub fn combine(self, other: Status) -> Status {
        let rank = |s: Status| match s {
            Status::Pass => 0,
            Status::Unsupported => 1,
            Status::VerificationFailure => 2,
            Status::InputError => 3,
        };
        if rank(other) > rank(self) {
            other
        } else {
            self
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Command {
    Analyze,
    FixedPoints,
    Bo { k: i64 },
    Matrix { k: i64 },
    Twist { k: i64 },
    Verify,
}

impl Command {
    pub fn name(&self) -> &'static str {
        match self {
            Command::Analyze => "analyze",
            Command::FixedPoints => "fixed-points",
            Command::Bo { .. } => "bo",
            Command::Matrix { .. } => "matrix",
            Command::Twist { .. } => "twist",
            Command::Verify => "verify",
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct Outcome {
    pub report: Report,
    pub status: Status,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CliError {
    pub status: Status,
    pub kind: &'static str,
    pub message: String,
    pub line: Option<usize>,
    pub field: Option<String>,
}

impl CliError {
    fn new(status: Status, kind: &'static str, message: impl Into<String>) -> Self {
        CliError {
            status,
            kind,
            message: message.into(),
            line: None,
            field: None,
        }
    }

    fn to_value(&self) -> Value {
        let mut o = Map::new();
        o.insert("kind".into(), json!(self.kind));
        o.insert("message".into(), json!(self.message));
        if let Some(l) = self.line {
            o.insert("line".into(), json!(l));
        }
        if let Some(f) = &self.field {
            o.insert("field".into(), json!(f));
        }
        Value::Object(o)
    }
}

impl From<ParseError> for CliError {
    fn from(e: ParseError) -> Self {
        CliError {
            status: Status::InputError,
            kind: "parse-error",
            message: e.message,
            line: e.line,
            field: e.field,
        }
    }
}

impl From<Error> for CliError {
    fn from(e: Error) -> Self {
        let (status, kind) = match &e {
            Error::InvalidDatum(_) => (Status::InputError, "invalid-datum"),
            Error::SameChamber => (Status::InputError, "same-chamber"),
            Error::NotAdjacent(_) => (Status::InputError, "not-adjacent"),
            Error::NotMinimal(_) => (Status::InputError, "not-minimal"),
            Error::DimensionMismatch(..) => (Status::InputError, "dimension-mismatch"),
            Error::NotCrepant => (Status::Unsupported, "not-crepant"),
            Error::SaturationFailure(_) => (Status::Unsupported, "saturation-failure"),
            Error::SingularAfterResampling(_) => {
                (Status::VerificationFailure, "singular-after-resampling")
            }
            _ => (Status::Unsupported, "computation-error"),
        };
        CliError::new(status, kind, e.to_string())
    }
}

/// A report describing a failure before any result could be produced.
pub fn error_outcome(command: &str, problem: Option<&str>, err: &CliError) -> Outcome {
    Outcome {
        report: Report::new(json!({
            "command": command,
            "problem": problem,
            "error": err.to_value(),
        })),
        status: err.status,
    }
}

/// Resampling budget per requested specialization.
const MAX_DRAWS: usize = 8;

fn one_based(idx: &[usize]) -> Vec<usize> {
    idx.iter().map(|i| i + 1).collect()
}

fn q(x: &BigRational) -> String {
    x.to_string()
}

fn ratio(x: &Ratio<i64>) -> String {
    x.to_string()
}

fn data(problem: &ProblemFile) -> Result<(GitDatum, GitDatum), CliError> {
    let plus = GitDatum::new(
        problem.rank,
        problem.characters.clone(),
        problem.omega_plus.clone(),
    )?;
    let minus = GitDatum::new(
        problem.rank,
        problem.characters.clone(),
        problem.omega_minus.clone(),
    )?;
    Ok((plus, minus))
}

fn require_valid(d: &GitDatum) -> Result<(), CliError> {
    d.minimal_anticones()?;
    Ok(())
}

fn crossing(problem: &ProblemFile) -> Result<WallCrossing, CliError> {
    let (plus, minus) = data(problem)?;
    require_valid(&plus)?;
    require_valid(&minus)?;
    let wc = analyze_wall(&plus, &minus)?;
    if !wc.crepant {
        return Err(Error::NotCrepant.into());
    }
    Ok(wc)
}

fn model(problem: &ProblemFile) -> Result<CrossingModel, CliError> {
    Ok(CrossingModel::new(&crossing(problem)?)?)
}

fn torus_names(m: usize) -> Vec<String> {
    (1..=m).map(|i| format!("x{i}")).collect()
}

fn global_names(r: usize, m: usize) -> Vec<String> {
    (1..=r)
        .map(|i| format!("L{i}"))
        .chain(torus_names(m))
        .collect()
}

fn k_range(problem: &ProblemFile, n: i64) -> (i64, i64) {
    problem.options.k_range.unwrap_or((-2, n + 2))
}

fn invertible_eulers(space: &Space, s: &SpecializationPoint) -> bool {
    space.fixed_points.iter().all(|fp| {
        let one = KElement::one(space.nt());
        match (
            space.fiber(fp, &space.normal_euler(fp), s),
            space.fiber(fp, &one, s),
        ) {
            (Ok(e), Ok(u)) => space.fiber_div(fp, &u, &e, s).is_ok(),
            _ => false,
        }
    })
}

/// Draws the requested specializations; points where an Euler class or a
/// restriction matrix degenerates are replaced by fresh draws.
pub fn specializations(
    pair: &CrossingPair,
    problem: &ProblemFile,
) -> Result<(Vec<SpecializationPoint>, usize), CliError> {
    let l = pair.model.root_order().max(pair.mirror.root_order());
    let bits = problem.options.prime_bits;
    if l >= (1u64 << (bits - 1)) / 4 {
        return Err(CliError::new(
            Status::InputError,
            "prime-too-small",
            format!("{bits}-bit primes are too small for root order {l}"),
        ));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(problem.options.seed);
    let spaces = [
        &pair.model.plus,
        &pair.model.minus,
        &pair.model.tilde,
        &pair.mirror.tilde,
    ];
    let mut out = Vec::new();
    let mut resampled = 0;
    for _ in 0..problem.options.specializations {
        let mut found = None;
        for _ in 0..MAX_DRAWS {
            let s = SpecializationPoint::random(&mut rng, pair.model.nt(), l, bits);
            let good = spaces.iter().all(|sp| invertible_eulers(sp, &s))
                && [&pair.model.plus, &pair.model.minus].iter().all(|sp| {
                    sp.restriction_matrix(&s)
                        .ok()
                        .and_then(|m| m.inverse(&s.field))
                        .is_some()
                });
            if good {
                found = Some(s);
                break;
            }
            resampled += 1;
        }
        out.push(found.ok_or(Error::SingularAfterResampling(MAX_DRAWS))?);
    }
    Ok((out, resampled))
}

fn point_value(s: &SpecializationPoint) -> Value {
    json!({
        "prime": s.field.modulus(),
        "root_order": s.root_order,
        "zeta": s.zeta,
        "y": s.y,
    })
}

fn matrix_value(m: &FpMatrix, s: &SpecializationPoint) -> Value {
    json!(m.signed_rows(&s.field))
}

fn side_name(side: Side) -> &'static str {
    match side {
        Side::Plus => "plus",
        Side::Minus => "minus",
        Side::Tilde => "blowup",
    }
}

fn header(command: &Command, problem: &ProblemFile) -> Map<String, Value> {
    let mut o = Map::new();
    o.insert("command".into(), json!(command.name()));
    o.insert("problem".into(), json!(problem.display_name()));
    match command {
        Command::Bo { k } | Command::Matrix { k } | Command::Twist { k } => {
            o.insert("k".into(), json!(k));
        }
        _ => {}
    }
    o
}

pub fn run(command: &Command, problem: &ProblemFile) -> Outcome {
    let mut report = header(command, problem);
    let result = match command {
        Command::Analyze => analyze(problem, &mut report),
        Command::FixedPoints => fixed_points(problem, &mut report),
        Command::Bo { k } => bo(problem, *k, &mut report),
        Command::Matrix { k } => matrix(problem, *k, &mut report),
        Command::Twist { k } => twist(problem, *k, &mut report),
        Command::Verify => verify(problem, &mut report),
    };
    let status = match result {
        Ok(status) => status,
        Err(e) => {
            report.insert("error".into(), e.to_value());
            e.status
        }
    };
    report.insert("status".into(), json!(format!("{status:?}")));
    Outcome {
        report: Report::new(Value::Object(report)),
        status,
    }
}

fn validation_value(v: &ValidationReport) -> Value {
    json!({
        "all_characters_anticone": v.a1.passed,
        "anticones_span": v.a2.passed,
        "witness": v.a1.witness.as_ref().or(v.a2.witness.as_ref()).map(Anticone::label),
    })
}

fn exceptional_value(ex: &ExceptionalDatum) -> Value {
    json!({
        "side": side_name(ex.side),
        "weights": ex.weights,
        "weight_sum": ex.weights.iter().sum::<i64>(),
        "saturation_index": ex.saturation_index,
        "saturated": ex.saturated(),
    })
}

fn wall_value(wc: &WallCrossing) -> Value {
    let pairings: Vec<i64> = (0..wc.m()).map(|i| wc.pairing(i)).collect();
    json!({
        "e": wc.e,
        "omega0": wc.omega0.iter().map(q).collect::<Vec<_>>(),
        "pairings": pairings,
        "M_plus": one_based(&wc.m_plus),
        "M_minus": one_based(&wc.m_minus),
        "M_zero": one_based(&wc.m_zero),
        "k": wc.k,
        "l": wc.l,
        "N": wc.n,
        "crepant": wc.crepant,
    })
}

fn analyze(problem: &ProblemFile, out: &mut Map<String, Value>) -> Result<Status, CliError> {
    out.insert("input".into(), problem.to_value());
    let (plus, minus) = data(problem)?;
    let (vp, vm) = (plus.validate(), minus.validate());
    out.insert(
        "validation".into(),
        json!({ "plus": validation_value(&vp), "minus": validation_value(&vm) }),
    );
    if !vp.passed() || !vm.passed() {
        return Err(CliError::new(
            Status::InputError,
            "invalid-datum",
            "a stability condition violates the standing assumptions",
        ));
    }
    let mut chambers = Map::new();
    for (name, d) in [("plus", &plus), ("minus", &minus)] {
        let minimal = d.minimal_anticones()?;
        chambers.insert(
            name.into(),
            json!({
                "minimal_anticones": minimal.iter().map(Anticone::label).collect::<Vec<_>>(),
                "extended_set": one_based(&d.extended_set()),
            }),
        );
    }
    out.insert("chambers".into(), Value::Object(chambers));
    let wc = analyze_wall(&plus, &minus)?;
    out.insert("wall".into(), wall_value(&wc));
    if !wc.crepant {
        return Err(Error::NotCrepant.into());
    }
    let blowup = build_blowup(&wc)?;
    let tilde: Vec<Value> = blowup
        .tilde_fixed_points(&wc)
        .iter()
        .map(|t| {
            json!({
                "delta": t.delta.label(),
                "kind": match t.kind { TildeKind::Flopping => "flopping", TildeKind::Nonflopping => "non-flopping" },
                "image_plus": t.image_plus.label(),
                "image_minus": t.image_minus.label(),
            })
        })
        .collect();
    out.insert(
        "blowup".into(),
        json!({
            "characters": blowup.characters,
            "exceptional_character": blowup.exceptional() + 1,
            "fixed_points": tilde,
        }),
    );
    out.insert(
        "exceptional_loci".into(),
        json!([
            exceptional_value(&exceptional_data(&wc, Side::Plus)),
            exceptional_value(&exceptional_data(&wc, Side::Minus)),
        ]),
    );
    Ok(Status::Pass)
}

fn space_value(space: &Space) -> Value {
    let names = torus_names(space.nt());
    let points: Vec<Value> = space
        .fixed_points
        .iter()
        .map(|fp| {
            let chars: Vec<Value> = fp
                .characters_with_lifts()
                .iter()
                .map(|c| {
                    json!({
                        "lift": c.rho_hat,
                        "exponent": c.exponent.iter().map(ratio).collect::<Vec<_>>(),
                    })
                })
                .collect();
            json!({
                "delta": fp.delta.label(),
                "order": fp.group_order,
                "invariant_factors": fp.invariant_factors.iter().map(|x| x.to_string()).collect::<Vec<_>>(),
                "euler": space.normal_euler(fp).fmt_with(&names),
                "characters": chars,
            })
        })
        .collect();
    json!({
        "side": side_name(space.side),
        "basis_size": space.basis_size(),
        "points": points,
    })
}

fn fixed_points(problem: &ProblemFile, out: &mut Map<String, Value>) -> Result<Status, CliError> {
    let model = model(problem)?;
    out.insert(
        "spaces".into(),
        json!([
            space_value(&model.plus),
            space_value(&model.minus),
            space_value(&model.tilde)
        ]),
    );
    Ok(Status::Pass)
}

fn class_value(space: &Space, c: &LocalizedClass) -> Value {
    let names = torus_names(space.nt());
    let rows: Vec<Value> = c
        .restrictions
        .iter()
        .map(|(d, x)| json!({ "delta": d.label(), "restriction": x.fmt_with(&names) }))
        .collect();
    json!(rows)
}

fn bo(problem: &ProblemFile, k: i64, out: &mut Map<String, Value>) -> Result<Status, CliError> {
    let model = model(problem)?;
    let images = bo_images(&model, k)?;
    let gnames = global_names(model.wc.rank(), model.nt());
    let mut all_genuine = true;
    let rows: Vec<Value> = model
        .minus
        .basis_labels()
        .into_iter()
        .zip(&images)
        .map(|(b, img)| {
            let genuine = model.plus.is_genuine(img);
            all_genuine &= genuine;
            json!({
                "source": model.minus.label_name(b),
                "genuine": genuine,
                "global": img.global.as_ref().map(|g| g.fmt_with(&gnames)),
                "restrictions": class_value(&model.plus, img),
            })
        })
        .collect();
    out.insert("images".into(), json!(rows));
    Ok(if all_genuine {
        Status::Pass
    } else {
        Status::VerificationFailure
    })
}

fn matrix(problem: &ProblemFile, k: i64, out: &mut Map<String, Value>) -> Result<Status, CliError> {
    let mut pair = CrossingPair::new(model(problem)?)?;
    let (points, resampled) = specializations(&pair, problem)?;
    let cols: Vec<String> = pair
        .model
        .minus
        .basis_labels()
        .into_iter()
        .map(|b| pair.model.minus.label_name(b))
        .collect();
    let rows: Vec<String> = pair
        .model
        .plus
        .basis_labels()
        .into_iter()
        .map(|b| pair.model.plus.label_name(b))
        .collect();
    out.insert("columns".into(), json!(cols));
    out.insert("rows".into(), json!(rows));
    out.insert("resampled".into(), json!(resampled));
    let mut mats = Vec::new();
    for s in &points {
        let m = pair.matrix(k, Direction::MinusToPlus, s)?;
        let mut v = point_value(s);
        v["invertible"] = json!(m.inverse(&s.field).is_some());
        v["entries"] = matrix_value(&m, s);
        mats.push(v);
    }
    out.insert("specializations".into(), json!(mats));
    Ok(Status::Pass)
}

fn twist(problem: &ProblemFile, k: i64, out: &mut Map<String, Value>) -> Result<Status, CliError> {
    let model = model(problem)?;
    let ex = exceptional_data(&model.wc, Side::Minus);
    out.insert("exceptional_locus".into(), exceptional_value(&ex));
    let class = substack_class(&model, k)?;
    let gnames = global_names(model.wc.rank(), model.nt());
    out.insert(
        "class".into(),
        json!({
            "global": class.global.as_ref().map(|g| g.fmt_with(&gnames)),
            "restrictions": class_value(&model.minus, &class),
        }),
    );
    let pair = CrossingPair::new(model)?;
    let (points, resampled) = specializations(&pair, problem)?;
    out.insert("resampled".into(), json!(resampled));
    let minus = &pair.model.minus;
    let structure = minus.restrict(&KElement::one(minus.global_dim()));
    let mut mats = Vec::new();
    for s in &points {
        let op = twist_operator(&pair.model, k, s)?;
        let mut v = point_value(s);
        v["chi_structure_sheaf"] = json!(s
            .field
            .signed(minus.euler_pairing(&structure, &op.class, s)?));
        v["chi_self"] = json!(s
            .field
            .signed(minus.euler_pairing(&op.class, &op.class, s)?));
        v["entries"] = matrix_value(&op.matrix(s), s);
        mats.push(v);
    }
    out.insert("specializations".into(), json!(mats));
    Ok(Status::Pass)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum VerdictStatus {
    Pass,
    Fail,
    Skipped,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Verdict {
    pub id: &'static str,
    pub identity: String,
    pub status: VerdictStatus,
    pub checks: usize,
    pub detail: Option<String>,
}

impl Verdict {
    fn value(&self) -> Value {
        json!({
            "id": self.id,
            "status": match self.status {
                VerdictStatus::Pass => "PASS",
                VerdictStatus::Fail => "FAIL",
                VerdictStatus::Skipped => "SKIPPED",
            },
            "checks": self.checks,
            "identity": self.identity,
            "detail": self.detail,
        })
    }
}

/// Counts checks and keeps the first failure.
struct Tally {
    checks: usize,
    failure: Option<String>,
}

impl Tally {
    fn new() -> Self {
        Tally {
            checks: 0,
            failure: None,
        }
    }

    fn check(&mut self, ok: bool, what: impl FnOnce() -> String) {
        self.checks += 1;
        if !ok && self.failure.is_none() {
            self.failure = Some(what());
        }
    }

    fn error(&mut self, e: Error, what: &str) {
        self.checks += 1;
        if self.failure.is_none() {
            self.failure = Some(format!("{what}: {e}"));
        }
    }

    fn verdict(self, id: &'static str, identity: impl Into<String>) -> Verdict {
        Verdict {
            id,
            identity: identity.into(),
            status: if self.failure.is_some() {
                VerdictStatus::Fail
            } else {
                VerdictStatus::Pass
            },
            checks: self.checks,
            detail: self.failure,
        }
    }
}

/// Runs `f`, recording an error as a failed check.
fn attempt<T>(t: &mut Tally, what: &str, f: impl FnOnce() -> Result<T, Error>) -> Option<T> {
    match f() {
        Ok(v) => Some(v),
        Err(e) => {
            t.error(e, what);
            None
        }
    }
}

fn restriction_normalization(spaces: &[&Space]) -> Verdict {
    let mut t = Tally::new();
    for space in spaces {
        let one = KElement::one(space.nt());
        for fp in &space.fixed_points {
            for &j in fp.delta.indices() {
                t.check(fp.restrict(&space.r_class(j)) == one, || {
                    format!(
                        "{} side, R_{} at {}",
                        side_name(space.side),
                        j + 1,
                        fp.delta
                    )
                });
            }
        }
    }
    t.verdict(
        "restriction-normalization",
        "R_j restricts to 1 at every fixed point delta with j in delta",
    )
}

fn basis_support(spaces: &[&Space], points: &[SpecializationPoint]) -> Verdict {
    let mut t = Tally::new();
    for space in spaces {
        for b in space.basis_labels() {
            let c = space.basis_class(b);
            let home = &space.fixed_points[b.point].delta;
            for (d, x) in &c.restrictions {
                if d != home {
                    t.check(x.is_zero(), || {
                        format!(
                            "{} side, {} restricts nontrivially to {d}",
                            side_name(space.side),
                            space.label_name(b)
                        )
                    });
                }
            }
        }
        for s in points {
            let Some(m) = attempt(&mut t, "restriction matrix", || space.restriction_matrix(s))
            else {
                continue;
            };
            let labels = space.basis_labels();
            let row_point: Vec<usize> = space
                .fixed_points
                .iter()
                .enumerate()
                .flat_map(|(i, f)| std::iter::repeat_n(i, f.characters_with_lifts().len()))
                .collect();
            let block = (0..m.rows)
                .all(|i| (0..m.cols).all(|j| row_point[i] == labels[j].point || m.get(i, j) == 0));
            t.check(block, || {
                format!(
                    "{} side, off-block entry at p = {}",
                    side_name(space.side),
                    s.field.modulus()
                )
            });
            t.check(m.inverse(&s.field).is_some(), || {
                format!(
                    "{} side, singular at p = {}",
                    side_name(space.side),
                    s.field.modulus()
                )
            });
        }
    }
    t.verdict(
        "basis-support",
        "e_(delta,rho) vanishes away from delta; the restriction matrix is block-diagonal and invertible",
    )
}

/// `1`, `R_j^{±1}`, `R_i R_j^{±1}` and `Π S_j`.
fn test_classes(space: &Space) -> Vec<(String, KElement)> {
    let m = space.datum.m();
    let mut out = vec![("1".to_string(), KElement::one(space.global_dim()))];
    for j in 0..m {
        out.push((format!("R{}", j + 1), space.r_class(j)));
        out.push((format!("S{}", j + 1), space.s_class(j)));
    }
    for i in 0..m {
        for j in i + 1..m {
            out.push((
                format!("R{}*R{}", i + 1, j + 1),
                &space.r_class(i) * &space.r_class(j),
            ));
            out.push((
                format!("R{}*S{}", i + 1, j + 1),
                &space.r_class(i) * &space.s_class(j),
            ));
        }
    }
    let all = (0..m).fold(KElement::one(space.global_dim()), |acc, j| {
        &acc * &space.s_class(j)
    });
    out.push(("S1*...*Sm".to_string(), all));
    out
}

fn reconstruction(spaces: &[&Space], points: &[SpecializationPoint]) -> Verdict {
    let mut t = Tally::new();
    for space in spaces {
        let classes: Vec<(String, LocalizedClass)> = test_classes(space)
            .into_iter()
            .map(|(n, g)| (n, space.restrict(&g)))
            .collect();
        for s in points {
            for (name, c) in &classes {
                let what = format!(
                    "{} side, {name} at p = {}",
                    side_name(space.side),
                    s.field.modulus()
                );
                let Some(back) = attempt(&mut t, &what, || {
                    let coeffs = space.decompose(c, s)?;
                    Ok((space.recompose(&coeffs, s)?, space.specialize_class(c, s)?))
                }) else {
                    continue;
                };
                t.check(back.0 == back.1, || what.clone());
            }
        }
    }
    t.verdict(
        "reconstruction",
        "recomposing the basis coordinates of a product of R_j^(+-1) returns the class",
    )
}

fn images_for(pair: &mut CrossingPair, k: i64, t: &mut Tally) -> Option<Vec<LocalizedClass>> {
    attempt(t, &format!("images for k = {k}"), || {
        pair.images(k, Direction::MinusToPlus).map(|v| v.to_vec())
    })
}

fn identity_case(pair: &mut CrossingPair, ks: (i64, i64)) -> Verdict {
    let mut t = Tally::new();
    let shared = shared_labels(&pair.model);
    for k in ks.0..=ks.1 {
        let Some(images) = images_for(pair, k, &mut t) else {
            continue;
        };
        let labels = pair.model.minus.basis_labels();
        for (bm, bp) in &shared {
            let idx = labels.iter().position(|b| b == bm).unwrap();
            let want = pair.model.plus.basis_class(*bp);
            t.check(images[idx].restrictions == want.restrictions, || {
                format!("k = {k}, {}", pair.model.minus.label_name(*bm))
            });
        }
    }
    let mut v = t.verdict(
        "identity-case",
        "BO_k fixes e_(delta,rho) when delta is a fixed point on both sides",
    );
    if shared.is_empty() && v.status == VerdictStatus::Pass {
        v.detail = Some("no fixed point is shared by the two sides".into());
    }
    v
}

fn polynomiality(pair: &mut CrossingPair, ks: (i64, i64)) -> Verdict {
    let mut t = Tally::new();
    for k in ks.0..=ks.1 {
        let Some(images) = images_for(pair, k, &mut t) else {
            continue;
        };
        for (b, img) in pair.model.minus.basis_labels().into_iter().zip(&images) {
            t.check(pair.model.plus.is_genuine(img), || {
                format!(
                    "k = {k}, image of {} is not admissible",
                    pair.model.minus.label_name(b)
                )
            });
        }
    }
    t.verdict(
        "polynomiality",
        "every restriction of BO_k(e_(delta,rho)) lies in the admissible lattice of its fixed point",
    )
}

fn formula_vs_blowup(
    pair: &mut CrossingPair,
    ks: (i64, i64),
    points: &[SpecializationPoint],
) -> Verdict {
    let mut t = Tally::new();
    for k in ks.0..=ks.1 {
        let Some(images) = images_for(pair, k, &mut t) else {
            continue;
        };
        let model = &pair.model;
        let labels = model.minus.basis_labels();
        for (b, img) in labels.iter().zip(&images) {
            let name = model.minus.label_name(*b);
            let Some(tilde) = attempt(&mut t, &format!("k = {k}, {name}"), || {
                blowup_restrictions(model, k, &model.minus.basis_class(*b))
            }) else {
                continue;
            };
            for s in points {
                let what = format!("k = {k}, {name} at p = {}", s.field.modulus());
                let Some((geo, formula)) = attempt(&mut t, &what, || {
                    Ok((
                        bo_geometric_at(model, &tilde, s)?,
                        model.plus.specialize_class(img, s)?,
                    ))
                }) else {
                    continue;
                };
                t.check(geo == formula, || what.clone());
            }
        }
    }
    t.verdict(
        "formula-vs-blowup",
        "closed formula for BO_k = pushforward through the common blow-up",
    )
}

fn duality(pair: &mut CrossingPair, ks: (i64, i64), points: &[SpecializationPoint]) -> Verdict {
    let mut t = Tally::new();
    for k in ks.0..=ks.1 {
        for s in points {
            let what = format!("k = {k} at p = {}", s.field.modulus());
            if let Some(ok) = attempt(&mut t, &what, || pair.duality_holds(k, s)) {
                t.check(ok, || what.clone());
            }
        }
    }
    t.verdict("duality", "BO'_((N-1)-k) BO_k = 1")
}

fn contraction_weights(wc: &WallCrossing) -> Verdict {
    let mut t = Tally::new();
    let pair = |i: usize| -> i64 {
        wc.plus
            .character(i)
            .iter()
            .zip(&wc.e)
            .map(|(a, b)| a * b)
            .sum()
    };
    let plus = exceptional_data(wc, Side::Plus);
    let minus = exceptional_data(wc, Side::Minus);
    let want_plus: Vec<i64> = wc.m_plus.iter().map(|&i| pair(i)).collect();
    let want_minus: Vec<i64> = wc.m_minus.iter().map(|&i| -pair(i)).collect();
    t.check(plus.weights == want_plus, || {
        format!("plus weights {:?}", plus.weights)
    });
    t.check(minus.weights == want_minus, || {
        format!("minus weights {:?}", minus.weights)
    });
    t.check(
        plus.weights.iter().all(|&w| w > 0) && minus.weights.iter().all(|&w| w > 0),
        || "nonpositive weight".into(),
    );
    t.check(plus.weights.iter().sum::<i64>() == wc.n, || {
        "plus weights do not sum to N".into()
    });
    t.check(minus.weights.iter().sum::<i64>() == wc.n, || {
        "minus weights do not sum to N".into()
    });
    t.verdict(
        "contraction-weights",
        "exceptional weights are (D_i.e) on M_+ and (-D_i.e) on M_-, each summing to N",
    )
}

fn twist_composites(pair: &mut CrossingPair, points: &[SpecializationPoint]) -> Verdict {
    let ex = exceptional_data(&pair.model.wc, Side::Minus);
    let identity = "FM' FM = product of T(O(-i))^-1 for 0 < i < N and BO'_(-k-1) BO_((N-1)+k) = T(O(k))^-1, on both sides";
    if !ex.saturated() {
        return Verdict {
            id: "twist-composites",
            identity: identity.into(),
            status: VerdictStatus::Skipped,
            checks: 0,
            detail: Some(format!(
                "wall characters generate a sublattice of index {} in the wall lattice",
                ex.saturation_index
            )),
        };
    }
    let mut t = Tally::new();
    let mut mirrored = CrossingPair::new(pair.mirror.clone()).expect("mirror of a valid crossing");
    for (side, p) in [("minus", &mut *pair), ("plus", &mut mirrored)] {
        for s in points {
            let what = format!("{side} side at p = {}", s.field.modulus());
            if let Some(checks) = attempt(&mut t, &what, || composites(p, s)) {
                for c in checks {
                    t.check(c.holds, || format!("{what}: {}", c.identity));
                }
            }
        }
    }
    t.verdict("twist-composites", identity)
}

fn twist_calibration(pair: &CrossingPair, points: &[SpecializationPoint]) -> Verdict {
    let identity =
        "chi(O, O_P(0)) = 1 and chi(O, O_P(-j)) = 0 for 0 < j < N on the exceptional locus";
    if !exceptional_data(&pair.model.wc, Side::Minus).saturated() {
        return Verdict {
            id: "twist-calibration",
            identity: identity.into(),
            status: VerdictStatus::Skipped,
            checks: 0,
            detail: Some("wall characters do not generate the wall lattice".into()),
        };
    }
    let mut t = Tally::new();
    for (side, model) in [("minus", &pair.model), ("plus", &pair.mirror)] {
        let space = &model.minus;
        let o = space.restrict(&KElement::one(space.global_dim()));
        for s in points {
            for j in 0..model.wc.n {
                let what = format!("{side} side, j = {j} at p = {}", s.field.modulus());
                let want = u64::from(j == 0);
                if let Some(v) = attempt(&mut t, &what, || {
                    space.euler_pairing(&o, &substack_class(model, -j)?, s)
                }) {
                    t.check(v == want, || what.clone());
                }
            }
        }
    }
    t.verdict("twist-calibration", identity)
}

fn kernels(seed: u64) -> Verdict {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(1);
    let mut t = Tally::new();
    let mut ids = Vec::new();
    for c in kernel_checks(&mut rng, 100) {
        ids.push(c.name);
        t.checks += c.instances;
        if c.failures > 0 && t.failure.is_none() {
            t.failure = Some(format!(
                "{}: {} of {} instances fail",
                c.name, c.failures, c.instances
            ));
        }
    }
    t.verdict(
        "kernel-properties",
        format!("{} on 100 random instances each", ids.join(", ")),
    )
}

/// The full identity suite for one problem.
pub fn verdicts(
    problem: &ProblemFile,
) -> Result<(Vec<Verdict>, Vec<SpecializationPoint>, usize), CliError> {
    let model = model(problem)?;
    let ks = k_range(problem, model.wc.n);
    let mut pair = CrossingPair::new(model)?;
    let (points, resampled) = specializations(&pair, problem)?;
    let spaces = [&pair.model.plus, &pair.model.minus, &pair.model.tilde];
    let mut out = vec![
        restriction_normalization(&spaces),
        basis_support(&spaces[..2], &points),
        reconstruction(&spaces[..2], &points),
        identity_case(&mut pair, ks),
        polynomiality(&mut pair, ks),
        formula_vs_blowup(&mut pair, ks, &points),
        duality(&mut pair, ks, &points),
        contraction_weights(&pair.model.wc),
    ];
    out.push(twist_composites(&mut pair, &points));
    out.push(twist_calibration(&pair, &points));
    out.push(kernels(problem.options.seed));
    Ok((out, points, resampled))
}

pub fn verdict_status(verdicts: &[Verdict]) -> Status {
    if verdicts.iter().any(|v| v.status == VerdictStatus::Fail) {
        Status::VerificationFailure
    } else if verdicts.iter().any(|v| v.status == VerdictStatus::Skipped) {
        Status::Unsupported
    } else {
        Status::Pass
    }
}

fn verify(problem: &ProblemFile, out: &mut Map<String, Value>) -> Result<Status, CliError> {
    let wc = crossing(problem)?;
    let ks = k_range(problem, wc.n);
    out.insert("wall".into(), wall_value(&wc));
    out.insert("k_range".into(), json!([ks.0, ks.1]));
    let (verdicts, points, resampled) = verdicts(problem)?;
    out.insert(
        "specializations".into(),
        json!(points.iter().map(point_value).collect::<Vec<_>>()),
    );
    out.insert("resampled".into(), json!(resampled));
    out.insert(
        "verdicts".into(),
        json!(verdicts.iter().map(Verdict::value).collect::<Vec<_>>()),
    );
    Ok(verdict_status(&verdicts))
}
