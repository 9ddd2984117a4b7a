//! The `loewner` binary is a thin wrapper over `cli::run`; it can be driven in-process too.

fn main() {
    let runs: [&[&str]; 3] = [
        &["loewner", "check", "monotone", "--fn", "sqrt", "--seed", "1", "--grids", "200"],
        &["loewner", "check", "lh", "--p", "2", "--seed", "1", "--trials", "50"],
        &["loewner", "rep", "power", "--p", "0.5", "--t", "2", "--t", "9"],
    ];
    for args in runs {
        let (mut out, mut err) = (Vec::new(), Vec::new());
        let code = loewner::cli::run(args.iter().copied(), &mut out, &mut err);
        let report: serde_json::Value = serde_json::from_slice(&out).expect("JSON report");
        println!("{} -> exit {code}", args[1..].join(" "));
        println!("  stderr: {}", String::from_utf8_lossy(&err).trim());
        println!("  result keys: {:?}", report["result"].as_object().map(|o| o.keys().collect::<Vec<_>>()));
    }
}
