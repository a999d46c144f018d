fn main() {
    std::process::exit(k3deg::cli::main_with_args(std::env::args_os()));
}
