//! Acceptance suite: one PASS/FAIL line per criterion, non-zero exit if any fail.

use std::path::Path;
use std::process::Command;
use std::time::{Duration, Instant};

use chrono::Duration as Span;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use outage_core::analytics::{
    avg_rmse, calibrate_fragility, calibration_points, resolution_sweep, ObservedOutageSeries, SweepScenario, TOTAL,
};
use outage_core::engine::{fragility_prob, Method, OutageModel, Trajectories};
use outage_core::geo::{haversine_km, LatLon};
use outage_core::network::{FragilityParams, RegionFragilityTable};
use outage_core::synth::{
    reference_bbox, reference_fragility, reference_track, reference_window, synth_network, synth_observed,
    SynthNetworkConfig, REFERENCE_REGIONS,
};
use outage_core::time::{parse_timestamp, time_grid, Timestamp};
use outage_core::wind::{
    generate_wind_fields, sustained_wind_at, BBox, StormState, TcTrack, TcTrackPoint, WindFieldSpec,
    WindProfileParams,
};

const SAN_JUAN: FragilityParams = FragilityParams { lambda: 4.4443, beta: 0.4226 };

type Check = Result<String, String>;

fn t0() -> Timestamp {
    parse_timestamp("2022-09-18T00:00:00Z").unwrap()
}

fn grid(n: usize, dt_s: i64) -> Vec<Timestamp> {
    (0..n).map(|k| t0() + Span::seconds(dt_s * k as i64)).collect()
}

fn single_feeder(gusts: Vec<f64>, dt_s: i64) -> OutageModel {
    OutageModel::from_gusts(grid(gusts.len(), dt_s), vec![gusts], vec![1.0], vec![SAN_JUAN]).unwrap()
}

fn budget(elapsed: Duration, limit_s: f64) -> Result<(), String> {
    if elapsed.as_secs_f64() < limit_s {
        Ok(())
    } else {
        Err(format!("took {:.2} s, budget {limit_s} s", elapsed.as_secs_f64()))
    }
}

fn hrsra_oracle() -> Check {
    let clock = Instant::now();
    let n = 10_000;
    let mut notes = Vec::new();
    for w in [60.0, 85.0, 120.0] {
        let p = fragility_prob(w, &SAN_JUAN);
        let tol = 3.0 * (p * (1.0 - p) / n as f64).sqrt();
        for steps in [1, 7, 40] {
            let ens = single_feeder(vec![w; steps], 600).run(Method::Hrsra, n, 101, false);
            for (k, frac) in ens.total.mean().iter().map(|m| m / 100.0).enumerate() {
                if (frac - p).abs() > tol {
                    return Err(format!("w={w} steps={steps} t={k}: {frac:.4} vs F={p:.4} (tol {tol:.4})"));
                }
            }
            if steps == 7 {
                notes.push(format!("w={w}: {:.4} vs {p:.4}", ens.mean_final_p_fail() / 100.0));
            }
        }
    }
    budget(clock.elapsed(), 10.0)?;
    Ok(format!("{} ({:.2} s)", notes.join(", "), clock.elapsed().as_secs_f64()))
}

fn smc_oracle() -> Check {
    let clock = Instant::now();
    let w = (SAN_JUAN.lambda + SAN_JUAN.beta * outage_core::normal::quantile(0.1)).exp();
    let f = fragility_prob(w, &SAN_JUAN);
    if (f - 0.1).abs() > 1e-12 {
        return Err(format!("per-step probability {f}"));
    }
    let ens = single_feeder(vec![w; 10], 600).run(Method::Smc, 10_000, 202, false);
    let survival = 1.0 - ens.mean_final_p_fail() / 100.0;
    let expected = 0.9_f64.powi(10);
    if (survival - expected).abs() > 0.015 {
        return Err(format!("survival {survival:.4} vs {expected:.4}"));
    }
    budget(clock.elapsed(), 10.0)?;
    Ok(format!("survival {survival:.4} vs 0.9^10 = {expected:.4} ({:.2} s)", clock.elapsed().as_secs_f64()))
}

fn failure_probability_curse() -> Check {
    let network = synth_network(&SynthNetworkConfig::default()).map_err(|e| e.to_string())?;
    let truth = reference_fragility();
    let track = reference_track();
    let (start, end) = reference_window();
    let spec = WindFieldSpec::new(reference_bbox());
    let wind = spec.generate_window(&track, start, end, 600).map_err(|e| e.to_string())?;
    let model = OutageModel::build_at(&network, &truth, &wind, time_grid(start, end, 600)).map_err(|e| e.to_string())?;
    let observed = synth_observed(&model);

    // refit every region against its own observed series
    let mut calibrated = RegionFragilityTable::new();
    for region in network.regions() {
        let pts = calibration_points(&network, &wind, &observed[region], Some(region)).map_err(|e| e.to_string())?;
        let fit = calibrate_fragility(&pts).map_err(|e| e.to_string())?;
        calibrated.insert(region.clone(), fit.params);
    }
    let scenario = SweepScenario {
        network: &network,
        fragility: &calibrated,
        track: &track,
        wind: spec,
        start,
        end,
        n_runs: 2000,
        master_seed: 2022,
    };
    let table = resolution_sweep(&scenario, &[600, 3600, 7200], &observed[TOTAL]).map_err(|e| e.to_string())?;
    let get = |m, dt| table.get(m, dt).unwrap();
    let h: Vec<f64> = [600, 3600, 7200].iter().map(|dt| get(Method::Hrsra, *dt)).collect();
    let s: Vec<f64> = [600, 3600, 7200].iter().map(|dt| get(Method::Smc, *dt)).collect();
    let (hmin, hmax) = (h.iter().cloned().fold(f64::MAX, f64::min), h.iter().cloned().fold(0.0, f64::max));
    let summary = format!(
        "HRSRA {:.3}/{:.3}/{:.3}, SMC {:.3}/{:.3}/{:.3} at 600/3600/7200 s",
        h[0], h[1], h[2], s[0], s[1], s[2]
    );
    let variation = (hmax - hmin) / hmin;
    if variation >= 0.25 {
        return Err(format!("HRSRA varies by {:.1}%: {summary}", 100.0 * variation));
    }
    // near-minimised: within 5% of the best resolution
    if h[0] > 1.05 * hmin {
        return Err(format!("HRSRA not near-minimised at 600 s: {summary}"));
    }
    if !(s[0] > s[1] && s[1] > s[2]) {
        return Err(format!("SMC not decreasing with coarser steps: {summary}"));
    }
    if s[0] <= 3.0 * h[0] {
        return Err(format!("SMC(600) not > 3 x HRSRA(600): {summary}"));
    }
    Ok(format!("{summary}, HRSRA spread {:.2}%", 100.0 * variation))
}

fn frequency_invariance() -> Check {
    let mut rng = ChaCha8Rng::seed_from_u64(4);
    let mut passed = 0;
    for case in 0..50 {
        let n_feeders = rng.random_range(1..8);
        let coarse_steps = rng.random_range(2..10);
        let split = rng.random_range(2..7);
        let loads: Vec<f64> = (0..n_feeders).map(|_| rng.random_range(0.1..30.0)).collect();
        let params: Vec<FragilityParams> = (0..n_feeders)
            .map(|k| {
                let r = REFERENCE_REGIONS[k % REFERENCE_REGIONS.len()];
                FragilityParams { lambda: r.1, beta: r.2 }
            })
            .collect();
        let coarse: Vec<Vec<f64>> =
            (0..n_feeders).map(|_| (0..coarse_steps).map(|_| rng.random_range(0.0..170.0)).collect()).collect();
        let fine: Vec<Vec<f64>> = coarse
            .iter()
            .map(|row| {
                let mut out: Vec<f64> = row[..row.len() - 1].iter().flat_map(|w| vec![*w; split]).collect();
                out.push(*row.last().unwrap());
                out
            })
            .collect();
        let dt = 600 * split as i64;
        let fine_steps = fine[0].len();
        let a = OutageModel::from_gusts(grid(coarse_steps, dt), coarse, loads.clone(), params.clone()).unwrap();
        let b = OutageModel::from_gusts(grid(fine_steps, 600), fine, loads, params).unwrap();
        let seed = rng.random::<u64>();
        let (ea, eb) = (a.run(Method::Hrsra, 200, seed, false), b.run(Method::Hrsra, 200, seed, false));
        let identical = (0..200).all(|j| {
            let fine_row = eb.total.row(j);
            ea.total.row(j).iter().enumerate().all(|(k, v)| v.to_bits() == fine_row[k * split].to_bits())
        });
        if identical {
            passed += 1;
        } else {
            return Err(format!("case {case} differs ({passed} passed before it)"));
        }
    }
    Ok(format!("{passed}/50 cases bit-identical"))
}

fn calibration_recovery() -> Check {
    let clock = Instant::now();
    let mut worst = (0.0_f64, 0.0_f64);
    for (name, lambda, beta, _, _) in REFERENCE_REGIONS {
        let truth = FragilityParams { lambda, beta };
        // 20 levels spanning the curve from its 1st to 99th percentile wind
        let (lo, hi) = (lambda - 2.326 * beta, lambda + 2.326 * beta);
        let pts: Vec<(f64, f64)> = (0..20)
            .map(|k| {
                let w = (lo + (hi - lo) * k as f64 / 19.0).exp();
                (w, fragility_prob(w, &truth))
            })
            .collect();
        let fit = calibrate_fragility(&pts).map_err(|e| format!("{name}: {e}"))?;
        let (dl, db) = ((fit.params.lambda - lambda).abs(), (fit.params.beta - beta).abs());
        if dl > 0.01 || db > 0.02 {
            return Err(format!("{name}: fitted ({:.4}, {:.4}) vs ({lambda}, {beta})", fit.params.lambda, fit.params.beta));
        }
        worst = (worst.0.max(dl), worst.1.max(db));
    }
    budget(clock.elapsed(), 5.0)?;
    Ok(format!(
        "7 regions, worst |dλ| {:.1e}, |dβ| {:.1e} ({:.2} s)",
        worst.0,
        worst.1,
        clock.elapsed().as_secs_f64()
    ))
}

fn wind_field_checks() -> Check {
    let centre = LatLon::new(18.0, -66.0);
    let params = WindProfileParams::default();
    let storm = StormState { center: centre, vmax: 38.6, rmax_km: 30.0, translation: (0.0, 0.0) };
    let (mut lo, mut hi) = (0.0, 1.0);
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if haversine_km(centre, LatLon::new(18.0 + mid, -66.0)) < 30.0 {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    let peak = sustained_wind_at(LatLon::new(18.0 + lo, -66.0), &storm, &params);
    let rel = (peak - 38.6).abs() / 38.6;
    if rel >= 1e-9 {
        return Err(format!("peak {peak} vs vmax 38.6"));
    }

    let (start, end) = reference_window();
    let series = WindFieldSpec::new(reference_bbox())
        .generate_window(&reference_track(), start, end, 600)
        .map_err(|e| e.to_string())?;
    let mut cells = 0usize;
    for k in 0..series.len() {
        for (g, s) in series.gust_raster(k).iter().zip(series.sustained_raster(k)) {
            if g.to_bits() != (1.49 * s).to_bits() {
                return Err(format!("gust {g} is not 1.49 x {s}"));
            }
            cells += 1;
        }
    }

    let fix = |t: &str, lat, lon| TcTrackPoint { timestamp: parse_timestamp(t).unwrap(), lat, lon, vmax: 40.0, rmax_km: 30.0 };
    let nw = TcTrack::new(vec![fix("2022-09-18T00:00:00Z", 17.0, -64.0), fix("2022-09-18T06:00:00Z", 17.8, -64.8)]).unwrap();
    let bbox = BBox::new(15.5, 19.5, -66.5, -62.5).unwrap();
    let field = generate_wind_fields(&nw, bbox, 0.05, 3600, &params).map_err(|e| e.to_string())?;
    let g = *field.grid();
    let centres = nw.interpolate(3600).unwrap();
    let mut margins = Vec::new();
    for (k, p) in centres.points().iter().enumerate() {
        let c = p.position();
        let (mut right, mut left) = (0.0_f64, 0.0_f64);
        let gust = field.gust_raster(k);
        for r in 0..g.nrows {
            for col in 0..g.ncols {
                let cell = g.cell_center(r, col);
                if haversine_km(c, cell) > 250.0 {
                    continue;
                }
                // heading north-west: (east, north) = (-1, 1)
                let cross = -(cell.lat - c.lat) - (cell.lon - c.lon);
                let v = gust[r * g.ncols + col];
                if cross < 0.0 {
                    right = right.max(v);
                } else if cross > 0.0 {
                    left = left.max(v);
                }
            }
        }
        if right < left {
            return Err(format!("step {k}: right {right:.2} < left {left:.2}"));
        }
        margins.push(right - left);
    }
    let min_margin = margins.iter().cloned().fold(f64::MAX, f64::min);
    Ok(format!(
        "peak rel err {rel:.1e}; {cells} gust cells at 1.49x; right-left max gust margin >= {min_margin:.2} m/s"
    ))
}

fn run_cli(args: &[&str]) -> Result<Duration, String> {
    let clock = Instant::now();
    let out = Command::new(env!("CARGO_BIN_EXE_outage-sim")).args(args).output().map_err(|e| e.to_string())?;
    if !out.status.success() {
        return Err(format!("{args:?}: {}", String::from_utf8_lossy(&out.stderr)));
    }
    Ok(clock.elapsed())
}

fn determinism_and_budget() -> Check {
    let dir = tempfile::tempdir().map_err(|e| e.to_string())?;
    let p = |name: &str| dir.path().join(name);
    let s = |path: &Path| path.to_str().unwrap().to_string();
    run_cli(&["synth", "--n-runs", "10000", "--out", &s(&p("fx"))])?;
    // the long-form per-region table is skipped to keep disk use bounded
    let cfg = std::fs::read_to_string(p("fx/config.toml")).map_err(|e| e.to_string())?;
    std::fs::write(p("fx/config.toml"), cfg.replace("regional = true", "regional = false")).map_err(|e| e.to_string())?;

    let mut timings = Vec::new();
    let mut reference: Option<(Vec<u8>, Vec<u8>)> = None;
    for threads in ["1", "4", "8"] {
        let out = p(&format!("t{threads}"));
        let elapsed = run_cli(&["--threads", threads, "simulate", "--config", &s(&p("fx/config.toml")), "--out", &s(&out)])?;
        timings.push(format!("{threads}w {:.2} s", elapsed.as_secs_f64()));
        budget(elapsed, 60.0).map_err(|e| format!("{threads} workers: {e}"))?;
        let files = (
            std::fs::read(out.join("ensemble.csv")).map_err(|e| e.to_string())?,
            std::fs::read(out.join("summary.json")).map_err(|e| e.to_string())?,
        );
        let summary: serde_json::Value = serde_json::from_slice(&files.1).map_err(|e| e.to_string())?;
        if summary["n_runs"] != 10_000 || summary["n_steps"] != 97 {
            return Err(format!("unexpected shape {} x {}", summary["n_runs"], summary["n_steps"]));
        }
        match &reference {
            None => reference = Some(files),
            Some(r) if *r != files => return Err(format!("outputs with {threads} workers differ from 1 worker")),
            Some(_) => {}
        }
    }
    let cores = std::thread::available_parallelism().map(|n| n.get()).unwrap_or(1);
    Ok(format!("N=10000, 936 feeders, 97 steps; byte-identical; {} on {cores} core(s)", timings.join(", ")))
}

fn rmse_constant_offset() -> Check {
    let ts = grid(12, 600);
    let obs: Vec<f64> = (0..12).map(|k| (k * k) as f64 * 0.5).collect();
    let observed = ObservedOutageSeries::new(TOTAL, ts.clone(), obs.clone()).map_err(|e| e.to_string())?;
    let offset = 5.0;
    let sim = Trajectories::from_rows(ts, &[obs.iter().map(|v| v + offset).collect()]);
    let r = avg_rmse(&observed, &sim).map_err(|e| e.to_string())?;
    if (r - offset).abs() > 1e-12 {
        return Err(format!("avg RMSE {r} vs {offset}"));
    }
    Ok(format!("avg RMSE {r} for a +{offset} offset"))
}

fn main() {
    let criteria: [(&str, fn() -> Check); 8] = [
        ("1 analytic HRSRA oracle", hrsra_oracle),
        ("2 analytic SMC oracle", smc_oracle),
        ("3 failure-probability curse sweep", failure_probability_curse),
        ("4 HRSRA frequency invariance", frequency_invariance),
        ("5 calibration recovery", calibration_recovery),
        ("6 wind-field checks", wind_field_checks),
        ("7 determinism and runtime budget", determinism_and_budget),
        ("8 RMSE constant offset", rmse_constant_offset),
    ];
    let mut failed = 0;
    for (name, check) in criteria {
        match check() {
            Ok(detail) => println!("PASS criterion {name}: {detail}"),
            Err(detail) => {
                failed += 1;
                println!("FAIL criterion {name}: {detail}");
            }
        }
    }
    println!("acceptance: {} of 8 criteria passed", 8 - failed);
    if failed > 0 {
        std::process::exit(1);
    }
}
