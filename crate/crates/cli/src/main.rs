fn main() {
    std::process::exit(pearcey_cli::run(std::env::args_os()));
}
