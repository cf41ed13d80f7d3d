fn main() {
    std::process::exit(monoground::cli::run(std::env::args_os()));
}
