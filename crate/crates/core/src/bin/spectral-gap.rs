use std::io;

fn main() {
    let code = spectral_gap::cli::run(std::env::args_os(), &mut io::stdout(), &mut io::stderr());
    std::process::exit(code);
}
