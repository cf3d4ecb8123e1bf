fn main() {
    std::process::exit(stratclass::cli::run());
}
