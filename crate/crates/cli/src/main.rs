fn main() {
    let code = qcollide_cli::run(std::env::args());
    std::process::exit(code);
}
