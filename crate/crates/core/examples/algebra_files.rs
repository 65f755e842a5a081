//! Algebra-definition files and the command-line front end, driven in-process:
//! load the sample files next to this example and run the same commands as `quasilin`.

use quasilin::cli::run_args;

fn main() {
    let data = concat!(env!("CARGO_MANIFEST_DIR"), "/examples/data");
    let runs: Vec<Vec<String>> = vec![
        vec!["jacobi".into(), format!("{data}/askey_wilson_poisson.json")],
        vec!["classify".into(), format!("{data}/askey_wilson_poisson.json")],
        vec!["export".into(), format!("{data}/q_oscillator_rewrite.json")],
        vec!["flow".into(), format!("{data}/q_oscillator.json"), "--rep".into(), "qosc:24:1/2".into(), "--t".into(), "0:0.4:3".into()],
        vec!["detect".into(), format!("{data}/krawtchouk.json")],
        vec!["export".into(), "dg".into()],
        vec!["verify".into(), "--suite".into(), "onsager".into()],
    ];
    for args in runs {
        let out = run_args(std::iter::once("quasilin".to_string()).chain(args.iter().cloned()));
        println!("$ quasilin {}  (exit {})", args.join(" "), out.code);
        print!("{}{}", out.stdout, out.stderr);
        println!();
    }
}
