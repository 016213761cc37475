fn main() {
    std::process::exit(conjseries::cli::run(std::env::args_os()));
}
