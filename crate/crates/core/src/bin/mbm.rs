use std::io::Write;

fn main() {
    let (code, text) = mbm::cli::run(std::env::args_os());
    let mut out = if text.starts_with("error") { Box::new(std::io::stderr()) as Box<dyn Write> } else { Box::new(std::io::stdout()) };
    let _ = out.write_all(text.as_bytes());
    std::process::exit(code);
}
