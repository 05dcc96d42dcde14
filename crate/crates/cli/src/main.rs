fn main() {
    std::process::exit(multequi_cli::run(std::env::args_os()));
}
