fn main() {
    std::process::exit(threshold_lab::cli::run());
}
