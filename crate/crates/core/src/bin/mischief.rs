fn main() {
    std::process::exit(mischief::cli::run(std::env::args_os()));
}
