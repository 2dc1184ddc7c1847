use std::fs::File;
use std::io::{BufWriter, Write};
use std::path::Path;

use malle_core::analytic::{c0, mb_constant, predict_count, tame_constant};
use malle_core::arith::{enumerate_bad_tuples, epi_count, hom_count, TupleContext};
use malle_core::error::cap_check;
use malle_core::exponents::{counterexample_report, naive_b_orbit, ReportMode, MAX_BRUTE_FORCE_N};
use malle_core::families::{build_gn, build_mixed_example};
use malle_core::fibered::FiberedDatum;
use malle_core::sieve::{sieve_capped, SieveTable};
use malle_core::{CocycleGroup, GroupDescriptor};

use crate::config::RunConfig;
use crate::report::{
    CountMode, CountPayload, CountRow, CounterexamplePayload, EulerKind, EulerPayload, Family, GroupPayload, Payload,
    PredictPayload, PredictRow, ProductPayload, Provenance,
};
use crate::{CliError, CliResult};

/// Groups at most this large also get their naive exponent in `group` reports.
const GROUP_REPORT_ENUMERATION: u64 = 100_000;

fn gn_order(n: usize) -> u128 {
    3u128.checked_pow(3 * n as u32 + 1).unwrap_or(u128::MAX)
}

fn table(cfg: &RunConfig, limit: u64) -> CliResult<SieveTable> {
    Ok(sieve_capped(limit.max(2), 9, cfg.caps.sieve_limit)?)
}

pub fn counterexample(cfg: &RunConfig, closed_form: bool) -> CliResult<Payload> {
    let n = cfg.require_n()?;
    let mode = if closed_form { ReportMode::ClosedForm } else { ReportMode::BruteForce };
    if mode == ReportMode::BruteForce {
        cap_check("brute-force report n", n as u128, MAX_BRUTE_FORCE_N as u128)?;
        cap_check("group enumeration", gn_order(n), cfg.caps.elements as u128)?;
    }
    let report = counterexample_report(n, mode)?;
    Ok(Payload::Counterexample(CounterexamplePayload { provenance: Provenance::Exact, report }))
}

pub fn count(cfg: &RunConfig, mode: CountMode, dump: Option<&Path>) -> CliResult<Payload> {
    let n = cfg.require_n()?;
    let bounds = cfg.bounds()?;
    if dump.is_some() && (mode != CountMode::Tuples || bounds.len() != 1) {
        return Err(CliError::Usage("--dump needs --mode tuples and a single --x".into()));
    }
    let largest = bounds.iter().copied().max().unwrap_or(0);
    let sieve = table(cfg, largest / 3)?;
    let ctx = match mode {
        CountMode::Hom => None,
        _ => {
            cap_check("group enumeration", gn_order(n), cfg.caps.elements as u128)?;
            Some(TupleContext::new(n)?)
        }
    };
    let mut rows = Vec::new();
    for &x in &bounds {
        let count = match (mode, &ctx) {
            (CountMode::Hom, _) => hom_count(n, x, &sieve)?.to_string(),
            (CountMode::Epi, Some(ctx)) => epi_count(ctx, x, &sieve)?.to_string(),
            (CountMode::Tuples, Some(ctx)) => {
                let stream = enumerate_bad_tuples(ctx, x, cfg.caps.tuples)?;
                match dump {
                    Some(path) => {
                        let mut out = BufWriter::new(File::create(path)?);
                        let mut k = 0u64;
                        for t in stream {
                            writeln!(out, "{t}")?;
                            k += 1;
                        }
                        out.flush()?;
                        k.to_string()
                    }
                    None => stream.count().to_string(),
                }
            }
            _ => unreachable!("context built for non-hom modes"),
        };
        rows.push(CountRow { x: x.to_string(), count });
    }
    Ok(Payload::Count(CountPayload {
        provenance: Provenance::Exact,
        n,
        mode,
        rows,
        tuple_dump: dump.map(|p| p.display().to_string()),
    }))
}

pub fn predict(cfg: &RunConfig) -> CliResult<Payload> {
    let n = cfg.require_n()?;
    let p = cfg.require_prime_bound()?;
    let sieve = table(cfg, p)?;
    let mut rows = Vec::new();
    let mut last = None;
    for (text, x) in cfg.x.iter().zip(cfg.float_bounds()?) {
        let pred = predict_count(n, x, p, &sieve)?;
        rows.push(PredictRow {
            x: text.trim().to_string(),
            value: crate::report::Float17(pred.value),
            ln_value: crate::report::Float17(pred.ln_value),
        });
        last = Some(pred);
    }
    let pred = last.expect("at least one bound");
    Ok(Payload::Predict(PredictPayload {
        provenance: Provenance::Truncated(p),
        n,
        alpha: pred.alpha,
        rows,
        c0: ProductPayload::from(&pred.c0),
    }))
}

fn family_group(cfg: &RunConfig, family: Family, n: usize) -> CliResult<(CocycleGroup, FiberedDatum)> {
    let order = match family {
        Family::Gn => gn_order(n),
        Family::Mixed => {
            let two = 2u128.checked_pow(2 * n as u32 + 1).unwrap_or(u128::MAX);
            two.saturating_mul(3u128.checked_pow(n as u32).unwrap_or(u128::MAX))
        }
    };
    cap_check("group enumeration", order, cfg.caps.elements as u128)?;
    Ok(match family {
        Family::Gn => {
            let g = build_gn(n)?;
            let f = FiberedDatum::theorem(&g, cfg.identification)?;
            (g, f)
        }
        Family::Mixed => {
            let g = build_mixed_example(n)?;
            let f = FiberedDatum::mixed(&g)?;
            (g, f)
        }
    })
}

pub fn euler(cfg: &RunConfig, kind: EulerKind, family: Family, allow_even: bool) -> CliResult<Payload> {
    let n = cfg.require_n()?;
    let p = cfg.require_prime_bound()?;
    let sieve = table(cfg, p)?;
    let result = match kind {
        EulerKind::C0 => {
            if family != Family::Gn {
                return Err(CliError::Usage("c0 is defined for the G_n family only".into()));
            }
            c0(n, p, &sieve)?
        }
        EulerKind::Mb => {
            let (g, f) = family_group(cfg, family, n)?;
            mb_constant(&g, &f, p, &sieve, allow_even)?
        }
        EulerKind::Tame => {
            let (g, f) = family_group(cfg, family, n)?;
            tame_constant(&g, &f, p, &sieve)?
        }
    };
    Ok(Payload::Euler(EulerPayload { euler_kind: kind, family, n, product: ProductPayload::from(&result) }))
}

pub fn group(cfg: &RunConfig, family: Option<Family>, from: Option<&Path>) -> CliResult<Payload> {
    let g = match (family, from) {
        (Some(_), Some(_)) | (None, None) => {
            return Err(CliError::Usage("group needs exactly one of --family and --from".into()))
        }
        (Some(Family::Gn), None) => build_gn(cfg.require_n()?)?,
        (Some(Family::Mixed), None) => build_mixed_example(cfg.require_n()?)?,
        (None, Some(path)) => {
            let d: GroupDescriptor = serde_json::from_reader(File::open(path)?)?;
            CocycleGroup::from_descriptor(&d)?
        }
    };
    cap_check("group enumeration", g.order() as u128, cfg.caps.elements as u128)?;
    let naive_b = if g.order() <= GROUP_REPORT_ENUMERATION { Some(naive_b_orbit(&g, cfg.caps.elements)?) } else { None };
    Ok(Payload::Group(GroupPayload {
        provenance: Provenance::Exact,
        descriptor: g.to_descriptor(),
        order: g.order(),
        exponent: g.exponent(),
        abelianization: g.abelianization_invariants(cfg.caps.elements)?,
        naive_b,
    }))
}
