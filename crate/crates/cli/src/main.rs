fn main() {
    std::process::exit(ihara_cli::run(std::env::args_os()));
}
