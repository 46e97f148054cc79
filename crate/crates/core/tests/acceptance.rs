//! Acceptance run: one PASS/FAIL line per criterion. All comparisons are
//! exact (tolerance 0) unless a line states otherwise.

mod common;

use std::path::Path;
use std::process::Command;
use std::time::{Duration, Instant};

use common::*;
use rand::Rng;
use ultranorm::forge::{
    build_certificate, check_certificate, choose_centers, interval_search, limit_table, make_schedule, make_small_schedule, cauchy_invert,
    Claim, ExpandedForge, ForcedDescentModel, ForgeCertificate, ForgeFactors, IntervalModel, Mode, SearchOutcome, Zone,
};
use ultranorm::gauss::{gauss_valuation, GaussPoint};
use ultranorm::models::{annulus_invert, qseries_norm, qseries_unbounded_witness, AnnulusElement, WitnessRow};
use ultranorm::{FieldDescriptor, LogValue, RadiusInterval, RatFun, ResidueKind};

type Outcome = Result<String, String>;

fn ensure(cond: bool, msg: impl Into<String>) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg.into())
    }
}

fn unit() -> RadiusInterval {
    RadiusInterval::new(LogValue::int(1), LogValue::int(2)).unwrap()
}

fn gl(p: u64, kind: ResidueKind) -> FieldDescriptor {
    FieldDescriptor::gen_laurent(p, kind).unwrap()
}

const RUNTIME_BUDGET: Duration = Duration::from_secs(120);

fn theorem_forge() -> Outcome {
    let start = Instant::now();
    let sch = make_schedule(gl(3, ResidueKind::Fp), &unit(), &LogValue::frac(1, 4), Mode::Theorem, 5, 1).map_err(|e| e.to_string())?;
    let centers = choose_centers(&sch).map_err(|e| e.to_string())?;
    let cert = build_certificate(&sch, &centers).map_err(|e| e.to_string())?;
    let elapsed = start.elapsed();
    if let Some(r) = cert.first_failure() {
        return Err(format!("n={} zone={} claim={:?} lhs={} rhs={}", r.n, r.zone, r.claim, r.lhs, r.rhs));
    }
    for zone in [Zone::Window, Zone::SmallRadius, Zone::LargeRadius, Zone::Near, Zone::Far, Zone::GapSpectral, Zone::Tail, Zone::AtDelta] {
        ensure(cert.records.iter().any(|r| r.zone == zone), format!("no records in zone {zone}"))?;
    }
    let width: Vec<_> = cert.records.iter().filter(|r| r.claim == Claim::WindowWidth).collect();
    ensure(width.len() == 5, "window width checked for every n")?;
    // gap bound exponent n - 14 - 6 c_log with c_log = 1/4
    for n in [4usize, 5] {
        let r = cert.records.iter().find(|r| r.n == n && r.claim == Claim::GapSpectral).ok_or("missing gap record")?;
        ensure(r.rhs == LogValue::frac(4 * n as i64 - 56 - 6, 4) && r.lhs >= r.rhs, format!("gap bound at n={n}"))?;
    }
    for n in 1..=5usize {
        let r = cert.records.iter().find(|r| r.n == n && r.claim == Claim::XnAtDelta).ok_or("missing delta record")?;
        ensure(r.rhs == LogValue::int(n as i64 - 1) && r.pass, format!("|x_{n}| at delta"))?;
    }
    ensure(elapsed < RUNTIME_BUDGET, format!("took {elapsed:?}"))?;
    Ok(format!("m = {}, {} records all pass, {:.2?} (budget 120 s)", sch.steps[0].m, cert.records.len(), elapsed))
}

fn example_forge() -> Outcome {
    let sch = make_schedule(gl(3, ResidueKind::FpU), &unit(), &LogValue::frac(1, 4), Mode::Example, 5, 1).map_err(|e| e.to_string())?;
    let centers = choose_centers(&sch).map_err(|e| e.to_string())?;
    let cert = build_certificate(&sch, &centers).map_err(|e| e.to_string())?;
    if let Some(r) = cert.first_failure() {
        return Err(format!("n={} zone={} claim={:?}", r.n, r.zone, r.claim));
    }
    for n in [4usize, 5] {
        let r = cert.records.iter().find(|r| r.n == n && r.claim == Claim::GapSpectral).ok_or("missing gap record")?;
        ensure(r.rhs == LogValue::int(n as i64 - 2), format!("gap exponent at n={n}"))?;
    }
    let samples: Vec<LogValue> = (2..=4).map(|n| sch.step(n).s.midpoint(&sch.step(n - 1).s)).collect();
    let table = limit_table(&sch, &centers, &samples).map_err(|e| e.to_string())?;
    ensure(table.delta_growth, "v(y_n) at delta not strictly growing or below n - 1")?;
    for row in &table.rows {
        ensure(row.stabilizes_as_predicted(), format!("s={} predicted {:?} observed {:?}", row.s, row.predicted, row.observed))?;
    }
    let idx: Vec<_> = table.rows.iter().map(|r| r.predicted.unwrap()).collect();
    Ok(format!("{} records all pass; stabilization at predicted indices {idx:?}", cert.records.len()))
}

fn oracle_equivalence() -> Outcome {
    let configs = [
        (gl(3, ResidueKind::Fp), unit(), Mode::Theorem, 3, 2),
        (gl(2, ResidueKind::Fp), RadiusInterval::new(LogValue::zero(), LogValue::int(3)).unwrap(), Mode::Theorem, 2, 2),
        (gl(5, ResidueKind::FpU), unit(), Mode::Theorem, 3, 1),
        (gl(3, ResidueKind::FpU), unit(), Mode::Example, 3, 2),
        (FieldDescriptor::padic(5).unwrap(), RadiusInterval::new(LogValue::zero(), LogValue::int(6)).unwrap(), Mode::Example, 3, 2),
    ];
    let mut matches = 0;
    let mut total = 0;
    for (field, interval, mode, depth, m) in configs {
        let sch = make_small_schedule(field, &interval, &LogValue::frac(1, 4), mode, depth, m).map_err(|e| e.to_string())?;
        let centers = choose_centers(&sch).map_err(|e| e.to_string())?;
        let lazy = ForgeFactors::build(&sch, &centers).map_err(|e| e.to_string())?;
        let full = ExpandedForge::build(&centers).map_err(|e| e.to_string())?;
        let step = interval.length().scale(&q(1, 31));
        for k in 0..32 {
            let s = &interval.s_lo + &step.scale_int(k);
            total += 1;
            let agree = (1..=depth).all(|n| {
                let (x, omx) = lazy.eval_factor(n, &s);
                let y = lazy.y(n, &s);
                let exact = x.tag.is_exact() && omx.tag.is_exact() && y.tag.is_exact();
                exact && full.values(n, &s).is_ok_and(|v| v == (x.value.clone(), omx.value.clone(), y.value.clone()))
            });
            matches += usize::from(agree);
        }
    }
    ensure(matches == total && total == 160, format!("{matches}/{total} matches"))?;
    Ok(format!("{matches}/{total} exact matches"))
}

fn gauss_properties() -> Outcome {
    let mut rng = rng(4);
    let fields = fields();
    for i in 0..1000 {
        let field = fields[i % fields.len()];
        let f = random_poly(&mut rng, field, 4);
        let g = random_poly(&mut rng, field, 4);
        let pt = random_point(&mut rng, field);
        let (vf, _) = gauss_valuation(&f, &pt).unwrap();
        let (vg, _) = gauss_valuation(&g, &pt).unwrap();
        let (vfg, _) = gauss_valuation(&f.mul(&g), &pt).unwrap();
        ensure(vfg == &vf + &vg, format!("multiplicativity failed for ({f}) * ({g})"))?;
    }
    for i in 0..200 {
        let field = fields[i % fields.len()];
        let f = random_poly(&mut rng, field, 3);
        let k = rng.gen_range(1..=4u32);
        let pt = random_point(&mut rng, field);
        let (vf, _) = gauss_valuation(&f, &pt).unwrap();
        let (vfk, _) = gauss_valuation(&f.pow(k), &pt).unwrap();
        ensure(vfk == vf.scale_int(k as i64), format!("power multiplicativity failed for ({f})^{k}"))?;
    }
    Ok("1000/1000 multiplicativity, 200/200 power checks (k <= 4), tolerance 0".into())
}

fn qseries_model() -> Outcome {
    let rows = qseries_unbounded_witness(10_000).map_err(|e| e.to_string())?;
    for (k, j) in [(1u64, 2u64), (10, 4), (100, 12)] {
        ensure(rows[k as usize - 1] == WitnessRow { k, j }, format!("j({k}) = {}", rows[k as usize - 1].j))?;
    }
    let last = rows.last().unwrap().j;
    ensure(last <= 110 && last > rows[99].j, format!("j(10^4) = {last}"))?;
    ensure(rows.windows(2).all(|w| w[0].j <= w[1].j), "j(k) not monotone")?;
    let mut rng = rng(5);
    for _ in 0..300 {
        let x = random_qseries(&mut rng);
        let y = random_qseries(&mut rng);
        let (nx, ny, nxy) = (qseries_norm(&x).unwrap(), qseries_norm(&y).unwrap(), qseries_norm(&x.mul(&y)).unwrap());
        // |xy| <= |x||y| with |x| = 2^-n
        ensure(nxy >= nx + ny, format!("submultiplicativity failed for {x} and {y}"))?;
    }
    Ok(format!("(1,2), (10,4), (100,12); j(10^4) = {last}; 300/300 submultiplicative pairs"))
}

fn annulus_field() -> Outcome {
    let field = FieldDescriptor::padic(2).unwrap();
    let s = LogValue::sqrt2();
    let mut rng = rng(6);
    for _ in 0..300 {
        let x = random_annulus(&mut rng, field, &s);
        let y = random_annulus(&mut rng, field, &s);
        ensure(x.mul(&y).valuation() == &x.valuation() + &y.valuation(), format!("({x}) * ({y})"))?;
    }
    let one = AnnulusElement::one(field, s.clone()).unwrap();
    let mut worst = LogValue::Infinity;
    for _ in 0..100 {
        let x = random_annulus(&mut rng, field, &s);
        let prec = LogValue::int(rng.gen_range(1..=12));
        let inv = annulus_invert(&x, &prec).map_err(|e| e.to_string())?;
        let residual = x.mul(&inv.inverse).sub(&one).valuation();
        ensure(residual > prec, format!("residual {residual} <= {prec} for {x}"))?;
        worst = std::cmp::min(worst, &residual - &prec);
    }
    Ok(format!("300/300 multiplicative, 100/100 inversions beat precision (least margin {worst})"))
}

fn interval_search_runs() -> Outcome {
    let field = gl(3, ResidueKind::Fp);
    let model = IntervalModel { interval: unit() };
    let trace = interval_search(&model, &RatFun::t(field), &LogValue::int(1), 20).map_err(|e| e.to_string())?;
    match &trace.outcome {
        SearchOutcome::Success { t, s_gamma, s_delta } => {
            ensure(trace.steps.len() == 1, "success not at iteration 0")?;
            ensure(*t == RatFun::t(field).to_string() && *s_gamma == LogValue::int(2) && *s_delta == LogValue::int(1), "wrong triple")?;
        }
        other => return Err(format!("interval model: {other:?}")),
    }
    let forced = ForcedDescentModel { base: model, excess: LogValue::int(3) };
    let trace = interval_search(&forced, &RatFun::t(field), &LogValue::int(1), 20).map_err(|e| e.to_string())?;
    ensure(trace.steps.len() == 20, format!("{} descent steps", trace.steps.len()))?;
    ensure(trace.invariants_hold(), "gamma did not shrink by c or |t|_spect moved")?;
    Ok("triple (t, 2^-2, 2^-1) at iteration 0; 20/20 forced descent steps with gamma_{n+1} < gamma_n / c".into())
}

fn cauchy_inverse() -> Outcome {
    let field = gl(3, ResidueKind::Fp);
    let seq: Vec<RatFun> = (1..=51).map(|n| RatFun::parse(&format!("t + z^{n}"), field).unwrap()).collect();
    let out = cauchy_invert(&seq, &GaussPoint::at(LogValue::zero()), &LogValue::zero()).map_err(|e| e.to_string())?;
    ensure(out.moduli.len() == 50, "fifty moduli")?;
    for r in &out.moduli {
        ensure(r.predicted == LogValue::int(r.n as i64) && r.direct == r.predicted, format!("modulus at n={}", r.n))?;
    }
    Ok("modulus = n exactly for n = 1..50, direct computation agrees".into())
}

fn run_cli(args: &[&str]) -> i32 {
    Command::new(env!("CARGO_BIN_EXE_ultranorm")).args(args).output().expect("spawn ultranorm").status.code().unwrap_or(-1)
}

fn flip_bit(src: &Path, dst: &Path, byte: usize, bit: u8) {
    let mut bytes = std::fs::read(src).unwrap();
    bytes[byte] ^= 1 << bit;
    std::fs::write(dst, bytes).unwrap();
}

fn cli_round_trip() -> Outcome {
    let dir = tempfile::tempdir().map_err(|e| e.to_string())?;
    let cert = dir.path().join("cert.json");
    let c = cert.to_str().unwrap();
    let code = run_cli(&["forge", "--mode", "theorem", "--depth", "3", "--field", "genlaurent:3", "--interval", "1,2", "--clog", "1/4", "--out", c]);
    ensure(code == 0, format!("forge exited {code}"))?;
    ensure(run_cli(&["check", c]) == 0, "check of untouched certificate failed")?;

    // one bit in the first stored rhs value
    let text = std::fs::read_to_string(&cert).unwrap();
    let parsed = ForgeCertificate::from_json(&text).map_err(|e| e.to_string())?;
    ensure(check_certificate(&parsed).map_err(|e| e.to_string())?.pass, "library check")?;
    let rhs_at = text.find("\"rhs\"").ok_or("no rhs")?;
    let digit = rhs_at + text[rhs_at..].find(|ch: char| ch.is_ascii_digit()).unwrap();
    let tampered = dir.path().join("tampered.json");
    flip_bit(&cert, &tampered, digit, 0);
    ensure(run_cli(&["check", tampered.to_str().unwrap()]) == 1, "rhs tamper not rejected")?;

    // further single-bit flips at seeded positions
    let mut rng = rng(9);
    let len = text.len();
    for _ in 0..12 {
        let (byte, bit) = (rng.gen_range(0..len), rng.gen_range(0..8u8));
        flip_bit(&cert, &tampered, byte, bit);
        let code = run_cli(&["check", tampered.to_str().unwrap()]);
        ensure(code == 1, format!("flip of bit {bit} at byte {byte} gave exit {code}"))?;
    }

    for bad in [
        vec!["forge", "--depth", "3", "--field", "padic:4", "--interval", "1,2", "--clog", "1/4"],
        vec!["forge", "--depth", "3", "--field", "genlaurent:3", "--interval", "2,1", "--clog", "1/4"],
        vec!["forge", "--depth", "3", "--field", "padic:3", "--interval", "1,2", "--clog", "1/4"],
        vec!["forge", "--field", "genlaurent:3"],
        vec!["frobnicate"],
    ] {
        let code = run_cli(&bad);
        ensure(code == 2, format!("{bad:?} exited {code}"))?;
    }
    Ok("forge -> check exit 0; 13/13 single-bit tampers exit 1; 5/5 malformed configs exit 2".into())
}

type Criterion = (&'static str, fn() -> Outcome);

fn main() {
    let criteria: [Criterion; 9] = [
        ("theorem forge, genlaurent:3, [1,2], c = 2^(1/4), N = 5", theorem_forge),
        ("example forge, genlaurent:3:u, N = 5, limit table", example_forge),
        ("lazy vs expanded evaluation on 5 small schedules", oracle_equivalence),
        ("Gauss valuation property suite", gauss_properties),
        ("Q-series witness table and submultiplicativity", qseries_model),
        ("annulus field at s = sqrt2 over padic:2", annulus_field),
        ("interval search and forced descent", interval_search_runs),
        ("Cauchy modulus of inverses of t + z^n", cauchy_inverse),
        ("CLI round trip and exit codes", cli_round_trip),
    ];
    let mut failed = 0;
    for (i, (name, run)) in criteria.iter().enumerate() {
        match run() {
            Ok(detail) => println!("PASS [{}] {name}: {detail}", i + 1),
            Err(why) => {
                failed += 1;
                println!("FAIL [{}] {name}: {why}", i + 1);
            }
        }
    }
    println!("acceptance: {}/{} criteria pass", criteria.len() - failed, criteria.len());
    if failed > 0 {
        std::process::exit(1);
    }
}
