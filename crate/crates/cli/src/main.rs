use std::io::Write;

fn main() {
    let report = invariant_means_cli::run_command(std::env::args().skip(1));
    print!("{}", report.stdout);
    eprint!("{}", report.stderr);
    let _ = std::io::stdout().flush();
    std::process::exit(report.code);
}
