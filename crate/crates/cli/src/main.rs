fn main() {
    let code = varmine_cli::run(std::env::args_os(), &mut std::io::stderr());
    std::process::exit(code);
}
