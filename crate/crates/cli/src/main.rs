use std::io::Write;
use std::process::ExitCode;

fn main() -> ExitCode {
    let (code, report) = vclab::run_command(std::env::args_os());
    for line in &report.messages {
        eprintln!("{line}");
    }
    if let Some(e) = &report.error {
        eprintln!("{e}");
    }
    if report.command.is_some() {
        match serde_json::to_string_pretty(&report) {
            Ok(text) => {
                // a closed pipe is not worth a panic
                let _ = writeln!(std::io::stdout(), "{text}");
            }
            Err(e) => eprintln!("cannot serialize report: {e}"),
        }
    }
    ExitCode::from(code as u8)
}
