fn main() {
    std::process::exit(gasvol::cli::run(std::env::args_os()));
}
