use hecke::config::RunConfig;
use hecke::exec::Pool;
use hecke::report::{config_json, render, run_sum};
use hecke::scan::run_scan;

fn sum_config() -> RunConfig {
    let mut c = RunConfig::default();
    c.apply_text("x = 2000\ny = 100\nmethod = both\ntimings = off\n").unwrap();
    c
}

#[test]
fn sum_report_ignores_thread_count() {
    let c = sum_config();
    let one = render(&run_sum(&c, &Pool::new(1).unwrap()).unwrap().to_json());
    let four = render(&run_sum(&c, &Pool::new(4).unwrap()).unwrap().to_json());
    assert_eq!(one, four);
}

#[test]
fn scan_ignores_thread_count() {
    let mut c = RunConfig::default();
    c.apply_text("x_grid = 300,3000\ny_rule = fixed:40\nmethod = poisson\ntimings = off\n").unwrap();
    let mut a = Vec::new();
    let mut b = Vec::new();
    run_scan(&c, &Pool::new(1).unwrap(), &mut a).unwrap();
    run_scan(&c, &Pool::new(3).unwrap(), &mut b).unwrap();
    assert_eq!(a, b);
    assert_eq!(String::from_utf8(a).unwrap().lines().filter(|l| !l.starts_with('#')).count(), 3);
}

#[test]
fn embedded_config_reparses() {
    let c = sum_config();
    let report = run_sum(&c, &Pool::new(1).unwrap()).unwrap().to_json();
    assert_eq!(report["config"], config_json(&c));
    let mut back = RunConfig::default();
    for (k, v) in report["config"].as_object().unwrap() {
        back.set(k, v.as_str().unwrap()).unwrap();
    }
    assert_eq!(back, c);
    let again = run_sum(&back, &Pool::new(2).unwrap()).unwrap().to_json();
    assert_eq!(render(&again), render(&report));
}
