fn main() {
    std::process::exit(restricted_pf::cli::run(std::env::args_os()));
}
