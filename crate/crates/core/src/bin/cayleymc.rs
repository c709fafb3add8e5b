fn main() {
    std::process::exit(cayleymc::cli::run(std::env::args_os()));
}
