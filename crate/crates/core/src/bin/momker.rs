use std::process::ExitCode;

use log::LevelFilter;

fn init_logging() {
    let level = match std::env::var("MOMKER_LOG").as_deref() {
        Ok("debug") => LevelFilter::Debug,
        Ok("info") => LevelFilter::Info,
        Ok("quiet") | Err(_) => LevelFilter::Off,
        Ok(other) => {
            eprintln!("momker: ignoring unknown MOMKER_LOG value {other:?}");
            LevelFilter::Off
        }
    };
    env_logger::Builder::new()
        .filter_level(level)
        .target(env_logger::Target::Stderr)
        .init();
}

fn main() -> ExitCode {
    init_logging();
    let (outcome, output) = momker::cli::run(std::env::args_os());
    let text = serde_json::to_string_pretty(&outcome.document).expect("serializable");
    // the document always goes to stdout; --output keeps an extra copy
    if let Some(path) = output.filter(|_| outcome.document.get("error").is_none()) {
        if let Err(e) = std::fs::write(&path, format!("{text}\n")) {
            let err = serde_json::json!({ "error": { "kind": "io", "detail": format!("cannot write {path}: {e}") } });
            println!("{err}");
            return ExitCode::from(momker::cli::EXIT_INPUT as u8);
        }
    }
    println!("{text}");
    ExitCode::from(outcome.code as u8)
}
