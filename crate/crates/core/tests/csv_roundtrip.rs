use jcas_core::sweep::{self, emit_csv, read_csv, Mode, SweepSpec, CSV_COLUMNS};

/// Nine significant digits leave at most half a unit in the ninth digit.
const SIG9_REL: f64 = 5e-9;

fn rel(a: f64, b: f64) -> f64 {
    if b == 0.0 {
        a.abs()
    } else {
        ((a - b) / b).abs()
    }
}

fn roundtrip(mode: Mode) {
    let spec = SweepSpec {
        mode,
        ..SweepSpec::default()
    };
    let table = sweep::run_sweep(&spec).unwrap();
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("t.csv");
    emit_csv(&table, &path).unwrap();
    let rows = read_csv(&path).unwrap();
    let per_point = if mode == Mode::All { 2 } else { 1 };
    assert_eq!(rows.len(), table.rows.len() * per_point);

    for (i, r) in rows.iter().enumerate() {
        let src = &table.rows[i / per_point];
        assert_eq!(r.n_elements, src.n_elements);
        assert_eq!(r.tx_power_dbw, src.tx_power_dbw);
        assert!(rel(r.comm_snr_db, src.link.comm_snr_db) <= SIG9_REL);
        assert!(rel(r.shannon_rate_bps, src.performance.shannon_rate_bps) <= SIG9_REL);
        assert!(rel(r.qpsk_capped_rate_bps, src.performance.qpsk_capped_rate_bps) <= SIG9_REL);
        let row_mode = match mode {
            Mode::All if i % 2 == 0 => Mode::RadarBistatic,
            Mode::All => Mode::RadarMonostatic,
            m => m,
        };
        assert_eq!(r.mode, row_mode);
        let radar = match row_mode {
            Mode::RadarBistatic => Some((&src.link.bistatic, &src.performance.bistatic)),
            Mode::RadarMonostatic => Some((&src.link.monostatic, &src.performance.monostatic)),
            _ => None,
        };
        match radar {
            None => {
                assert!(r.radar_snr_single_db.is_none() && r.range_mse_m2.is_none());
                assert!(r.detection_feasible.is_none());
            }
            Some((b, p)) => {
                assert!(rel(r.radar_snr_single_db.unwrap(), b.snr_single_db) <= SIG9_REL);
                assert!(rel(r.radar_snr_integrated_db.unwrap(), b.snr_integrated_db) <= SIG9_REL);
                assert!(rel(r.range_mse_m2.unwrap(), p.range_mse_m2) <= SIG9_REL);
                assert!(rel(r.range_rmse_m.unwrap(), p.range_rmse_m) <= SIG9_REL);
                assert_eq!(r.detection_feasible, Some(p.detection_feasible));
            }
        }
    }
}

#[test]
fn every_mode_round_trips() {
    for mode in [Mode::Comm, Mode::RadarBistatic, Mode::RadarMonostatic, Mode::All] {
        roundtrip(mode);
    }
}

#[test]
fn header_and_metadata_layout() {
    let table = sweep::run_sweep(&SweepSpec::default()).unwrap();
    let mut buf = Vec::new();
    sweep::write_csv(&table, &mut buf).unwrap();
    let text = String::from_utf8(buf).unwrap();
    let meta: Vec<&str> = text.lines().take_while(|l| l.starts_with('#')).collect();
    assert!(meta.iter().any(|l| l.starts_with("# fingerprint: ") && l.ends_with(&table.fingerprint)));
    assert!(meta.iter().any(|l| l.starts_with("# constants: constants-v1")));
    let header = text.lines().nth(meta.len()).unwrap();
    assert_eq!(header, CSV_COLUMNS.join(","));
    assert_eq!(text.lines().count(), meta.len() + 1 + 45);
}

#[test]
fn garbage_files_are_rejected() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("bad.csv");
    std::fs::write(&path, "a,b,c\n1,2,3\n").unwrap();
    assert!(read_csv(&path).is_err());
    assert!(read_csv(&dir.path().join("missing.csv")).is_err());
}
