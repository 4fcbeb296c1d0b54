use outage_core::geo::{haversine_km, LatLon};
use outage_core::synth::{reference_bbox, reference_track, reference_window};
use outage_core::time::parse_timestamp;
use outage_core::wind::{
    generate_wind_fields, sustained_wind_at, BBox, StormState, TcTrack, TcTrackPoint, WindFieldSpec,
    WindProfileParams, DEFAULT_GUST_FACTOR,
};

fn fix(t: &str, lat: f64, lon: f64) -> TcTrackPoint {
    TcTrackPoint { timestamp: parse_timestamp(t).unwrap(), lat, lon, vmax: 40.0, rmax_km: 30.0 }
}

fn northwestward() -> TcTrack {
    TcTrack::new(vec![fix("2022-09-18T00:00:00Z", 17.0, -64.0), fix("2022-09-18T06:00:00Z", 17.8, -64.8)]).unwrap()
}

#[test]
fn peak_equals_vmax_at_rmax() {
    let centre = LatLon::new(18.0, -66.0);
    let storm = StormState { center: centre, vmax: 38.6, rmax_km: 30.0, translation: (0.0, 0.0) };
    // walk north until exactly rmax away
    let (mut lo, mut hi) = (0.0, 1.0);
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if haversine_km(centre, LatLon::new(18.0 + mid, -66.0)) < 30.0 {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    let v = sustained_wind_at(LatLon::new(18.0 + lo, -66.0), &storm, &WindProfileParams::default());
    assert!((v - 38.6).abs() / 38.6 < 1e-9, "{v}");
}

#[test]
fn gust_is_fixed_multiple_of_sustained() {
    let (start, end) = reference_window();
    let series = WindFieldSpec::new(reference_bbox()).generate_window(&reference_track(), start, end, 3600).unwrap();
    for k in 0..series.len() {
        let gust = series.gust_raster(k);
        for (g, s) in gust.iter().zip(series.sustained_raster(k)) {
            assert_eq!(g.to_bits(), (DEFAULT_GUST_FACTOR * s).to_bits());
            if *s > 0.0 {
                assert!((g / s - 1.49).abs() <= 2.0 * f64::EPSILON);
            }
        }
    }
}

#[test]
fn stationary_storm_is_symmetric() {
    // two identical fixes: no translation, so speed depends on distance alone
    let track =
        TcTrack::new(vec![fix("2022-09-18T00:00:00Z", 18.0, -66.0), fix("2022-09-18T01:00:00Z", 18.0, -66.0)]).unwrap();
    let bbox = BBox::new(17.0, 19.0, -67.0, -65.0).unwrap();
    let series = generate_wind_fields(&track, bbox, 0.05, 3600, &WindProfileParams::default()).unwrap();
    let grid = *series.grid();
    let raster = series.sustained_raster(0);
    // mirror images across the centre meridian are equidistant on the sphere
    for r in 0..grid.nrows {
        for c in 0..grid.ncols {
            let v = raster[r * grid.ncols + c];
            let mirrored = raster[r * grid.ncols + (grid.ncols - 1 - c)];
            assert!((v - mirrored).abs() <= 1e-9 * v.max(1.0), "row {r} col {c}: {v} vs {mirrored}");
        }
    }
    let storm = StormState { center: LatLon::new(18.0, -66.0), vmax: 40.0, rmax_km: 30.0, translation: (0.0, 0.0) };
    let params = WindProfileParams::default();
    for d in [0.1, 0.27, 0.5, 0.9] {
        let north = sustained_wind_at(LatLon::new(18.0 + d, -66.0), &storm, &params);
        let south = sustained_wind_at(LatLon::new(18.0 - d, -66.0), &storm, &params);
        assert!((north - south).abs() <= 1e-12 * north, "{d}: {north} vs {south}");
    }
}

#[test]
fn right_of_track_is_windier() {
    let track = northwestward();
    let bbox = BBox::new(15.5, 19.5, -66.5, -62.5).unwrap();
    let series = generate_wind_fields(&track, bbox, 0.05, 3600, &WindProfileParams::default()).unwrap();
    let grid = *series.grid();
    let moving = track.interpolate(3600).unwrap();
    let heading = (-1.0, 1.0); // north-west in (east, north)
    for (k, p) in moving.points().iter().enumerate() {
        let centre = p.position();
        let (mut right, mut left) = (0.0_f64, 0.0_f64);
        let gust = series.gust_raster(k);
        for r in 0..grid.nrows {
            for c in 0..grid.ncols {
                let cell = grid.cell_center(r, c);
                if haversine_km(centre, cell) > 250.0 {
                    continue;
                }
                let (de, dn) = (cell.lon - centre.lon, cell.lat - centre.lat);
                let cross = heading.0 * dn - heading.1 * de;
                let g = gust[r * grid.ncols + c];
                if cross < 0.0 {
                    right = right.max(g);
                } else if cross > 0.0 {
                    left = left.max(g);
                }
            }
        }
        assert!(right > left, "step {k}: right {right} left {left}");
    }
}

#[test]
fn generation_is_pure() {
    let (start, end) = reference_window();
    let spec = WindFieldSpec::new(reference_bbox());
    let a = spec.generate_window(&reference_track(), start, end, 600).unwrap();
    let b = spec.generate_window(&reference_track(), start, end, 600).unwrap();
    assert_eq!(a, b);
}

#[test]
fn raster_counts_per_resolution() {
    let (start, end) = reference_window();
    let spec = WindFieldSpec::new(reference_bbox());
    for (dt, n) in [(600, 97), (3600, 17), (7200, 9)] {
        assert_eq!(spec.generate_window(&reference_track(), start, end, dt).unwrap().len(), n);
    }
}

#[test]
fn coarse_field_matches_fine_field_at_shared_times() {
    let (start, end) = reference_window();
    let spec = WindFieldSpec::new(reference_bbox());
    let fine = spec.generate_window(&reference_track(), start, end, 600).unwrap();
    let coarse = spec.generate_window(&reference_track(), start, end, 3600).unwrap();
    for k in 0..coarse.len() {
        let (a, b) = (coarse.sustained_raster(k), fine.sustained_raster(6 * k));
        let worst = a.iter().zip(b).map(|(x, y)| (x - y).abs()).fold(0.0, f64::max);
        assert!(worst < 0.5, "step {k}: {worst} m/s");
    }
}
