use std::process::{Command, Output};

fn rns3(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_rns3"))
        .args(args)
        .output()
        .unwrap()
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

#[test]
fn encode_decode() {
    let o = rns3(&["encode", "--n", "2", "100"]);
    assert_eq!(
        (o.status.code(), stdout(&o).as_str()),
        (Some(0), "R1=0 R2=10 R3=15\n")
    );
    assert_eq!(stdout(&rns3(&["encode", "--n", "1", "23"])), "R1=1 R2=2 R3=3\n");
    let o = rns3(&["encode", "--n", "2", "1020"]);
    assert_eq!(o.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&o.stderr).contains("X must be < 1020"));

    assert_eq!(stdout(&rns3(&["decode", "--n", "2", "0", "10", "15"])), "X=100\n");
    assert_eq!(
        rns3(&["decode", "--n", "2", "0", "15", "15"]).status.code(),
        Some(2)
    );
}

#[test]
fn trace_prints_msb_first_words() {
    let out = stdout(&rns3(&["decode", "--n", "2", "--trace", "0", "10", "15"]));
    let lines: Vec<&str> = out.lines().collect();
    assert_eq!(lines.first(), Some(&"S1'   11100001 (225)"));
    assert!(lines.contains(&"S2    01010101 (85)"));
    assert!(lines.contains(&"carry 11000011 (195)"));
    assert_eq!(lines.last(), Some(&"Y=25 X=100"));
}

#[test]
fn large_values_roundtrip_through_cli() {
    // n = 32: M = 2^32 (2^128 - 1), just under 2^160.
    let x = "0xedcba9876543210fedcba9876543210012345678";
    let enc = stdout(&rns3(&["encode", "--n", "32", x]));
    let parts: Vec<&str> = enc.split_whitespace().map(|p| &p[3..]).collect();
    let mut args = vec!["decode", "--n", "32"];
    args.extend(&parts);
    let dec = stdout(&rns3(&args));
    let expect = num_bigint::BigUint::parse_bytes(&x.as_bytes()[2..], 16).unwrap();
    assert_eq!(dec, format!("X={expect}\n"));
}

#[test]
fn verify_is_deterministic() {
    let o = rns3(&["verify", "--n", "2", "--exhaustive"]);
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).contains("roundtrip: checked 1020 values, 0 failures"));

    let args = [
        "verify",
        "--n",
        "16",
        "--random",
        "--samples",
        "10000",
        "--seed",
        "7",
    ];
    let a = rns3(&args);
    let b = rns3(&args);
    assert_eq!(a.status.code(), Some(0));
    assert_eq!(a.stdout, b.stdout);
    assert!(stdout(&a).ends_with("result: ok\n"));

    assert_eq!(
        rns3(&["verify", "--n", "5", "--exhaustive"]).status.code(),
        Some(2)
    );
}

#[test]
fn cost_tables() {
    let o = rns3(&["costs", "--table", "4", "--format", "csv"]);
    let out = stdout(&o);
    assert_eq!(out.lines().count(), 5);
    assert_eq!(out.lines().nth(1), Some("8,2,3,151,136,11.02,12,14,14.2"));
    let o = rns3(&[
        "costs", "--table", "2", "--n", "13", "--m", "22", "--format", "csv",
    ]);
    let out = stdout(&o);
    assert!(out.contains("ours,13,t_MA(52)+t_NOT+t_FA,15,18"));
    assert!(out.contains("ref11,22,t_MA(44)+t_NOT+t_MUX+t_FA,15,20"));
    assert_eq!(rns3(&["costs", "--table", "9"]).status.code(), Some(2));
}

#[test]
fn bench_reports_three_timings() {
    let out = stdout(&rns3(&["bench", "--n", "16", "--iters", "1000"]));
    for name in ["forward_convert", "reverse_convert", "crt_reconstruct"] {
        assert!(out.contains(&format!("{name}: ")), "{out}");
    }
    assert_eq!(
        rns3(&["bench", "--n", "0", "--iters", "1"]).status.code(),
        Some(2)
    );
}
