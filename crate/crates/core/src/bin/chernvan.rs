fn main() {
    std::process::exit(chernvan::cli::run());
}
