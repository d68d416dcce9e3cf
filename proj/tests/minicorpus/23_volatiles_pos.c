void f(void)
{
    volatile int v = 0;
    (void)v;
}
