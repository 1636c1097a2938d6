fn main() {
    std::process::exit(secdiag_cli::run());
}
