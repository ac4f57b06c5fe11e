fn main() {
    std::process::exit(pyramid_core::cli::run(std::env::args_os()));
}
