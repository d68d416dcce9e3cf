void f(void)
{
    const int x = 1;
    (void)x;
}
