fn main() {
    std::process::exit(palinsieve::cli::run());
}
