fn main() {
    std::process::exit(molqi::cli::main_with_args(std::env::args_os()));
}
