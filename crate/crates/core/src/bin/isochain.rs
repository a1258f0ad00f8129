fn main() {
    std::process::exit(isochain::cli::run(std::env::args_os()));
}
