fn main() {
    std::process::exit(lpg::cli::run(std::env::args_os()));
}
