fn main() {
    std::process::exit(interlace::cli::main_with_args(std::env::args_os()));
}
