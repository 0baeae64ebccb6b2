use awe_takeoff::io::{
    write_design_trace, write_takeoff_trace, DESIGN_TRACE_HEADER, TAKEOFF_TRACE_HEADER,
};
use awe_takeoff::spring_design::evaluate_spring_traced;
use awe_takeoff::{run_takeoff, Config};

fn read_back(bytes: &[u8]) -> (Vec<String>, Vec<csv::StringRecord>) {
    let mut r = csv::Reader::from_reader(bytes);
    let header = r.headers().unwrap().iter().map(str::to_owned).collect();
    (header, r.records().map(Result::unwrap).collect())
}

#[test]
fn config_overrides_reach_the_takeoff_trace() {
    let cfg = Config::from_json_str(
        r#"{ "simulation": { "takeoff": { "duration": 1.0, "initial_slack": 1.5 } } }"#,
    )
    .unwrap();
    let r = run_takeoff(&cfg.simulation.takeoff, &cfg.system(), &cfg.controller).unwrap();
    assert_eq!(r.trace.len(), 1001);
    assert_eq!(r.slack_estimate[0], 1.5);

    let mut buf = Vec::new();
    write_takeoff_trace(&mut buf, &r.trace).unwrap();
    let (header, rows) = read_back(&buf);
    assert_eq!(header, TAKEOFF_TRACE_HEADER);
    assert_eq!(rows.len(), r.trace.len());
    let last = &rows[rows.len() - 1];
    assert_eq!(last[0].parse::<f64>().unwrap(), 1.0);
    assert_eq!(&last[15], "airborne");
    // floats survive the round trip exactly
    assert_eq!(
        last[10].parse::<f64>().unwrap(),
        r.trace.last().unwrap().slide_torque
    );
}

#[test]
fn design_trace_round_trips() {
    let cfg = Config::from_json_str(r#"{ "spring": { "max_travel": 0.2 } }"#).unwrap();
    let (res, trace) = evaluate_spring_traced(
        &cfg.system(),
        &cfg.simulation.initial,
        &cfg.simulation.design,
    )
    .unwrap();
    let mut buf = Vec::new();
    write_design_trace(&mut buf, &trace).unwrap();
    let (header, rows) = read_back(&buf);
    assert_eq!(header, DESIGN_TRACE_HEADER);
    let min = rows
        .iter()
        .map(|r| r[2].parse::<f64>().unwrap())
        .fold(f64::INFINITY, f64::min);
    assert_eq!(min, res.min_speed);
    let t_last: f64 = rows.last().unwrap()[0].parse().unwrap();
    assert_eq!(Some(t_last), res.t_star);
}
