use gnss_predict_wasm::{band_split, forecast_values, outlier_indices, sample_values};

#[test]
fn forecast_of_a_line() {
    let v: Vec<f64> = (0..40).map(|i| 1.0 + 0.01 * i as f64).collect();
    let f = forecast_values(&v, 86_400.0, 32, 2, 5).unwrap();
    assert_eq!(f.len(), 5);
    for (k, x) in f.iter().enumerate() {
        assert!((x - (1.0 + 0.01 * (40 + k) as f64)).abs() < 1e-9);
    }
}

#[test]
fn split_reconstructs() {
    let v = sample_values(3, 101, 2);
    let b = band_split(&v, "db2").unwrap();
    assert_eq!(b.len(), 2 * v.len());
    for (i, x) in v.iter().enumerate() {
        assert!((b[i] + b[v.len() + i] - x).abs() < 1e-12);
    }
    assert!(band_split(&v, "bogus").is_err());
}

#[test]
fn spikes_are_found() {
    let mut v: Vec<f64> = (0..80).map(|i| 0.5 + 1e-4 * i as f64).collect();
    v[40] += 0.3;
    assert_eq!(outlier_indices(&v, 86_400.0, 20, 0.03).unwrap(), vec![40]);
}

#[test]
fn sample_is_deterministic() {
    assert_eq!(sample_values(9, 120, 3), sample_values(9, 120, 3));
    assert_eq!(sample_values(9, 120, 3).len(), 120);
}
