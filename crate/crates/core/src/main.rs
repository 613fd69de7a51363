use std::io::Write;

fn main() {
    let inv = cuspenv::cli::run(std::env::args_os());
    // Nothing useful can be done if the streams are closed.
    let _ = std::io::stdout().write_all(inv.stdout.as_bytes());
    let _ = std::io::stderr().write_all(inv.stderr.as_bytes());
    std::process::exit(inv.code);
}
