use cusp_eta::cusps_index::{index_report, signature_index, ManifoldDescription};
use cusp_eta::exact::{Rational, TwistParameter};
use cusp_eta::heisenberg::{eta_closed_real, eta_series, HeisenbergMetric, LatticeType};

fn q(s: &str) -> Rational {
    s.parse().unwrap()
}

#[test]
fn signature_manifold_from_config() {
    let json = r#"{"n":4,"bundle":{"kind":"signature"},"bulk":{"kind":"volume_ratio","v":"3/5"},"cusps":[{"d":[1,1,2]},{"d":[2,2,2]}]}"#;
    let m: ManifoldDescription = serde_json::from_str(json).unwrap();
    let report = index_report(&m).unwrap();
    let expected = signature_index(4, &q("3/5"), &[2, 8], 2).unwrap();
    assert_eq!(report.extended_index, expected);
    assert_eq!(report.l2_index, Some(expected));
    assert!(report.fredholm);
    assert_eq!(report.h_sum, 0);
}

#[test]
fn odd_spinor_manifold_needs_no_h_diff() {
    let json = r#"{"n":5,"bundle":{"kind":"spinor","twist":"0"},"bulk":{"kind":"volume_ratio","v":"2"},"cusps":[{"d":[1,1,1,1]}]}"#;
    let m: ManifoldDescription = serde_json::from_str(json).unwrap();
    let report = index_report(&m).unwrap();
    assert!(!report.fredholm);
    assert_eq!(report.h_sum, 6);
    assert_eq!(report.extended_index, q("3"));
    assert_eq!(report.l2_index, Some(Rational::zero()));
}

#[test]
fn series_converges_to_closed_form_with_scaled_metric() {
    let d = LatticeType::new(vec![1, 3]).unwrap();
    let c = TwistParameter::new(q("1/3")).unwrap();
    let metric = HeisenbergMetric::new(vec![0.7, 1.2], 0.9).unwrap();
    let series = eta_series(&d, &c, 3, &metric, 6.0, 4000).unwrap();
    let closed = eta_closed_real(&d, &c, 3, &metric, 6.0, 1e-15).unwrap();
    assert!((series.value - closed.value).abs() <= series.tail_bound + 1e-15);
}
