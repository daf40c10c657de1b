fn main() {
    std::process::exit(refinv::cli::run(std::env::args_os()));
}
