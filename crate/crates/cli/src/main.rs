fn main() {
    let code = qsm_cli::run(std::env::args_os());
    std::process::exit(code);
}
