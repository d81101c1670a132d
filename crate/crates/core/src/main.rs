fn main() {
    std::process::exit(sl2z::cli::run(std::env::args_os()));
}
