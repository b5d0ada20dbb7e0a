use clap::Parser;
use dilations_cli::{execute, Cli, ExitStatus};

fn main() {
    let cli = Cli::parse();
    let (out, status) = execute(&cli);
    println!("{out}");
    if status == ExitStatus::Invalid {
        if let Ok(env) = serde_json::from_str::<dilations_cli::Envelope>(&out) {
            eprintln!("dilate: {}", env.witnesses.get("error").and_then(|e| e.as_str()).unwrap_or(&env.verdict));
        }
    }
    std::process::exit(status as i32);
}
