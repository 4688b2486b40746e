fn main() {
    std::process::exit(geproci::cli::run());
}
