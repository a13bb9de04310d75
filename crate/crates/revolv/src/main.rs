fn main() {
    std::process::exit(revolv::cli::run(std::env::args_os()));
}
