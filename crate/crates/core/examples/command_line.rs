//! Driving the command-line interface in-process.

use std::io::Write;

const MODEL: &str = "\
mdp
states idle work
init idle
label work served
action idle start : work 1
action idle wait : idle 1
action work stay : work 3/4 , idle 1/4
";

fn call(args: &[&str]) -> i32 {
    let mut out = Vec::new();
    let mut err = Vec::new();
    let code = freqsynth::cli::run(std::iter::once("freqsynth").chain(args.iter().copied()), &mut out, &mut err);
    print!("{}", String::from_utf8_lossy(&out));
    eprint!("{}", String::from_utf8_lossy(&err));
    println!("exit {code}\n");
    code
}

pub fn run_example() -> freqsynth::Result<()> {
    let io = |e: std::io::Error| freqsynth::Error::Io(e.to_string());
    let mut file = tempfile::NamedTempFile::new().map_err(io)?;
    file.write_all(MODEL.as_bytes()).map_err(io)?;
    let model = file.path().to_str().unwrap();

    call(&["synth", "--model", model, "--formula", "G{>=3/4,inf} served", "--threshold", "1"]);
    call(&["synth", "--model", model, "--formula", "G{>=4/5,inf} served", "--threshold", "1/2"]);
    call(&["check-word", "--formula", "G F served", "--stem", "{}", "--loop", "{served};{}"]);
    call(&["mec", "--model", model, "--formula", "G{>=3/4,inf} served"]);
    call(&["simulate", "--model", model, "--formula", "G{>=3/4,inf} served", "--steps", "20000", "--episodes", "2"]);
    Ok(())
}

#[allow(dead_code)]
fn main() -> freqsynth::Result<()> {
    run_example()
}
