fn main() {
    std::process::exit(fblab::main_with(std::env::args_os()));
}
