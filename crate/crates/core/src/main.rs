fn main() {
    std::process::exit(frustra::cli::run());
}
