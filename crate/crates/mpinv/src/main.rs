fn main() {
    std::process::exit(mpinv::cli::run());
}
